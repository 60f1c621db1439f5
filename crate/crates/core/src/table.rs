//! The classification table: JSON schema, the embedded reference data and
//! per-row verification.
//!
//! Fractions are always `"p/q"` strings. Curves are referred to by label;
//! `C2`, `C3` name the tracked curves used in boundaries and relations.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complement::{self, ComplementCertificate};
use crate::enumerate::{SearchResult, Surface};
use crate::graph::{DualGraph, GraphError, GraphRecord, VertexId};
use crate::intersection::{self, SurfaceDivisor};
use crate::pair::{self, FibreMark, LogPair, PairError};
use crate::rational::{format, int, is_integral, serde_map, serde_str, Rational};

const GOLDEN: &str = include_str!("../data/golden_table.json");

#[derive(Debug, Error)]
pub enum TableError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Pair(#[from] PairError),
    #[error(transparent)]
    Intersection(#[from] intersection::IntersectionError),
    #[error("row {0}: no curve labelled {1}")]
    UnknownLabel(u32, String),
    #[error("no row {0}")]
    UnknownRow(u32),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementRecord {
    pub n: u32,
    /// Full `B+`, C included.
    #[serde(with = "serde_map")]
    pub coefficients: BTreeMap<String, Rational>,
    /// Exceptional coefficients of the pullback of `K + B+`, when stated.
    #[serde(default, with = "serde_map", skip_serializing_if = "BTreeMap::is_empty")]
    pub crepant: BTreeMap<String, Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryRecord {
    #[serde(with = "serde_map")]
    pub b1: BTreeMap<String, Rational>,
    #[serde(with = "serde_str")]
    pub max_b: Rational,
    pub complements: Vec<ComplementRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

/// `divisor = fraction * H`; `divisor` is `-K` or a curve label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub divisor: String,
    #[serde(with = "serde_str")]
    pub fraction: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub id: u32,
    pub s_c_label: String,
    pub c2: i64,
    pub graph: GraphRecord,
    #[serde(default)]
    pub fibration: BTreeMap<String, FibreMark>,
    pub boundary_options: Vec<BoundaryRecord>,
    pub relations: Vec<RelationRecord>,
    #[serde(default)]
    pub moves: Vec<String>,
    #[serde(default)]
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub rows: Vec<TableRow>,
}

impl ClassificationTable {
    pub fn golden() -> Self {
        Self::from_json(GOLDEN).expect("embedded table parses")
    }

    pub fn from_json(s: &str) -> Result<Self, TableError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialises") + "\n"
    }

    pub fn row(&self, id: u32) -> Result<&TableRow, TableError> {
        self.rows.iter().find(|r| r.id == id).ok_or(TableError::UnknownRow(id))
    }

    /// Number of `(row, boundary option)` pairs.
    pub fn sub_row_count(&self) -> usize {
        self.rows.iter().map(|r| r.boundary_options.len()).sum()
    }
}

impl TableRow {
    pub fn dual_graph(&self) -> Result<DualGraph, TableError> {
        Ok(DualGraph::from_record(&self.graph)?)
    }

    fn id_of(&self, g: &DualGraph, label: &str) -> Result<VertexId, TableError> {
        g.find(label).ok_or_else(|| TableError::UnknownLabel(self.id, label.to_string()))
    }

    fn by_id(
        &self,
        g: &DualGraph,
        m: &BTreeMap<String, Rational>,
    ) -> Result<BTreeMap<VertexId, Rational>, TableError> {
        m.iter().map(|(l, q)| Ok((self.id_of(g, l)?, q.clone()))).collect()
    }

    /// `(S, 6/7 C + B1)` for one boundary option.
    pub fn pair(&self, option: &BoundaryRecord) -> Result<LogPair, TableError> {
        let g = self.dual_graph()?;
        let b1 = self.by_id(&g, &option.b1)?;
        let fib = self
            .fibration
            .iter()
            .map(|(l, f)| Ok((self.id_of(&g, l)?, *f)))
            .collect::<Result<_, TableError>>()?;
        Ok(LogPair::new(g, pair::six_sevenths(), b1)?.with_fibration(fib))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub id: u32,
    pub checks: Vec<Check>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: String, passed: bool, detail: String) {
        self.checks.push(Check { name, passed, detail });
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub h_squared: Option<Rational>,
    pub failures: Vec<String>,
}

fn divisor_of(row: &TableRow, g: &DualGraph, name: &str) -> Result<SurfaceDivisor, TableError> {
    if name == "-K" {
        return Ok(SurfaceDivisor::canonical().scale(&int(-1)));
    }
    Ok(SurfaceDivisor::curve(row.id_of(g, name)?))
}

/// If `D_i = f_i H` then `D_i.D_j / (f_i f_j)` is the same number `H^2`
/// for every pair, and `H^2` is a positive integer since H is Cartier.
pub fn check_relations(row: &TableRow) -> Result<RelationReport, TableError> {
    let g = row.dual_graph()?;
    let mut failures = Vec::new();
    let divs: Vec<(String, SurfaceDivisor, Rational)> = row
        .relations
        .iter()
        .map(|r| Ok((r.divisor.clone(), divisor_of(row, &g, &r.divisor)?, r.fraction.clone())))
        .collect::<Result<_, TableError>>()?;
    let mut h2: Option<Rational> = None;
    for (i, (na, da, fa)) in divs.iter().enumerate() {
        for (nb, db, fb) in &divs[i..] {
            let x = intersection::intersect(&g, da, db)?;
            let v = x / (fa * fb);
            match &h2 {
                None => h2 = Some(v),
                Some(h) if *h != v => failures.push(format!(
                    "{na}.{nb} gives H^2 = {}, expected {}",
                    format(&v),
                    format(h)
                )),
                _ => {}
            }
        }
    }
    if let Some(h) = &h2 {
        if !h.is_positive() || !is_integral(h) {
            failures.push(format!("H^2 = {} is not a positive integer", format(h)));
        }
    }
    Ok(RelationReport { h_squared: h2, failures })
}

/// Re-derives every column of a row and compares with what it states.
pub fn verify_row(row: &TableRow) -> Result<RowReport, TableError> {
    let mut rep = RowReport { id: row.id, checks: Vec::new() };
    let g = row.dual_graph()?;
    let c2 = g.curve_c().map(|c| g.weight(c));
    rep.push("C^2".into(), c2 == Some(row.c2), format!("{c2:?}"));

    for (i, opt) in row.boundary_options.iter().enumerate() {
        let tag = if row.boundary_options.len() > 1 { format!("[{}]", i + 1) } else { String::new() };
        let p = row.pair(opt)?;

        let mb = pair::max_b(&p)?;
        rep.push(
            format!("max_b{tag}"),
            mb == opt.max_b,
            format!("computed {}, stated {}", format(&mb), format(&opt.max_b)),
        );

        let ex = pair::ex_report(&p)?;
        let (lhs, rhs) = pair::zhang_count(&p)?;
        rep.push(
            format!("EX1-EX4{tag}"),
            ex.all(),
            format!(
                "ex1 {} ex2 {} ex3 {} ex4 {} {}",
                ex.ex1,
                ex.ex2,
                ex.ex3,
                ex.ex4,
                ex.violations.join("; ")
            ),
        );
        rep.push(format!("section count{tag}"), lhs == rhs, format!("{lhs} vs {rhs}"));

        for cr in &opt.complements {
            let cert = ComplementCertificate {
                n: cr.n,
                plus_coefficients: row.by_id(&g, &cr.coefficients)?,
            };
            let r = complement::verify_complement(&p, &cert)?;
            let mut ok = r.passed();
            let mut detail = r.failures.join("; ");
            if !cr.crepant.is_empty() {
                let got = intersection::crepant_pullback(&g, &cert.plus_coefficients)?;
                let want = row.by_id(&g, &cr.crepant)?;
                let same = got.coefficients.iter().all(|(v, q)| {
                    want.get(v).cloned().unwrap_or_else(Rational::zero) == *q
                });
                if !same {
                    ok = false;
                    detail.push_str("crepant coefficients differ");
                }
            }
            rep.push(format!("{}-complement{tag}", cr.n), ok, detail);
        }

        let found = complement::find_complement(&p, 7)?;
        rep.push(format!("7-complement search{tag}"), found.is_some(), String::new());
    }

    let rel = check_relations(row)?;
    rep.push(
        "relations".into(),
        rel.failures.is_empty(),
        match &rel.h_squared {
            Some(h) if rel.failures.is_empty() => format!("H^2 = {}", format(h)),
            _ => rel.failures.join("; "),
        },
    );
    Ok(rep)
}

/// Complements of `p` with `n <= max_n`: a search for `n <= 7`, and the
/// complement `max_b C + B1` for larger `n` when it is one.
pub fn compute_complements(
    p: &LogPair,
    max_b: &Rational,
    max_n: u32,
) -> Result<Vec<ComplementCertificate>, PairError> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        if n <= 7 {
            if let Some(c) = complement::find_complement(p, n)? {
                out.push(c);
            }
            continue;
        }
        let plus = p.with_b(max_b.clone()).full_boundary();
        let nq = int(i64::from(n));
        if !plus.values().all(|q| is_integral(&(q * &nq))) {
            continue;
        }
        let cert = ComplementCertificate { n, plus_coefficients: plus };
        if complement::verify_complement(p, &cert)?.passed() {
            out.push(cert);
        }
    }
    Ok(out)
}

fn labelled(g: &DualGraph, m: &BTreeMap<VertexId, Rational>) -> BTreeMap<String, Rational> {
    m.iter().map(|(&v, q)| (g.label(v).to_string(), q.clone())).collect()
}

fn option_form(g: &DualGraph, b1: &BTreeMap<VertexId, Rational>) -> crate::graph::CanonicalForm {
    g.canonical_form_tagged(&b1.iter().map(|(&v, q)| (v, format(q))).collect())
}

/// Assembles search output into table rows, numbered after the reference
/// rows they are isomorphic to. Anything without a counterpart is kept and
/// flagged.
pub fn build_table(
    res: &SearchResult,
    reference: &ClassificationTable,
    max_n: u32,
) -> Result<ClassificationTable, TableError> {
    let refs: Vec<(&TableRow, DualGraph)> = reference
        .rows
        .iter()
        .map(|r| Ok((r, r.dual_graph()?)))
        .collect::<Result<_, TableError>>()?;
    let mut rows = Vec::new();
    let mut spare = 100;
    for s in &res.surfaces {
        let matched = refs
            .iter()
            .find_map(|(r, rg)| s.state.graph.isomorphism_to(rg).map(|iso| (*r, rg, iso)));
        let row = match matched {
            Some((r, rg, iso)) => {
                let names = iso.iter().map(|(&a, &b)| (a, rg.label(b).to_string())).collect();
                row_from_surface(s, r.id, Some((r, &names)), max_n)?
            }
            None => {
                spare += 1;
                row_from_surface(s, spare, None, max_n)?
            }
        };
        rows.push(row);
    }
    rows.sort_by_key(|r| r.id);
    Ok(ClassificationTable { rows })
}

fn row_from_surface(
    s: &Surface,
    id: u32,
    reference: Option<(&TableRow, &BTreeMap<VertexId, String>)>,
    max_n: u32,
) -> Result<TableRow, TableError> {
    let g = match reference {
        Some((_, names)) => s.state.graph.relabelled(names)?,
        None => s.state.graph.clone(),
    };
    let ref_forms: Vec<crate::graph::CanonicalForm> = match reference {
        Some((r, _)) => r
            .boundary_options
            .iter()
            .map(|o| Ok(option_form(&g, &r.by_id(&g, &o.b1)?)))
            .collect::<Result<_, TableError>>()?,
        None => Vec::new(),
    };
    let mut options: Vec<(usize, BoundaryRecord)> = Vec::new();
    for o in &s.options {
        let p = LogPair::unchecked(g.clone(), pair::six_sevenths(), o.boundary.clone())?;
        let complements = compute_complements(&p, &o.max_b, max_n)?
            .into_iter()
            .map(|c| ComplementRecord {
                n: c.n,
                coefficients: labelled(&g, &c.plus_coefficients),
                crepant: BTreeMap::new(),
            })
            .collect();
        let pos = ref_forms.iter().position(|f| *f == option_form(&g, &o.boundary));
        let mut flags = Vec::new();
        if reference.is_some() && pos.is_none() {
            flags.push("boundary option without a reference sub-row".to_string());
        }
        options.push((
            pos.unwrap_or(usize::MAX),
            BoundaryRecord { b1: labelled(&g, &o.boundary), max_b: o.max_b.clone(), complements, flags },
        ));
    }
    options.sort_by_key(|(i, _)| *i);
    let mut flags = Vec::new();
    let (relations, provenance) = match reference {
        Some((r, _)) => {
            if ref_forms.len() > options.iter().filter(|(i, _)| *i != usize::MAX).count() {
                flags.push("reference sub-row not produced by the search".to_string());
            }
            (r.relations.clone(), format!("search; matched reference row {}", r.id))
        }
        None => {
            flags.push("no reference row".to_string());
            (Vec::new(), "search".to_string())
        }
    };
    Ok(TableRow {
        id,
        s_c_label: s.s_c_label.clone(),
        c2: s.state.c_squared(),
        fibration: s
            .state
            .fibration
            .iter()
            .map(|(&v, &f)| (g.label(v).to_string(), f))
            .collect(),
        graph: g.to_record(),
        boundary_options: options.into_iter().map(|(_, o)| o).collect(),
        relations,
        moves: s.state.moves.iter().map(ToString::to_string).collect(),
        provenance,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_parses_and_round_trips() {
        let t = ClassificationTable::golden();
        assert_eq!(t.rows.len(), 20);
        let back = ClassificationTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn row_five_relations() {
        let t = ClassificationTable::golden();
        let r = check_relations(t.row(5).unwrap()).unwrap();
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert_eq!(r.h_squared, Some(int(15)));
    }

    #[test]
    fn row_four_seven_complement() {
        let t = ClassificationTable::golden();
        let rep = verify_row(t.row(4).unwrap()).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }
}

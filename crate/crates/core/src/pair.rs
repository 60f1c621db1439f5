//! Log pairs `(S, bC + B1)` given on the minimal resolution, and the
//! conditions (EX1)-(EX4) together with the numerical bounds that drive the
//! search.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CurveContext, DualGraph, VertexClass, VertexId, VertexRole};
use crate::intersection::{self, CrepantData, IntersectionError, SurfaceDivisor};
use crate::rational::{format, int, rat, Rational};
use crate::singularity::{self, CyclicQuotientType, ResolutionChain};

/// Coefficients `(m-1)/m` allowed on components other than C.
pub fn standard_small() -> [Rational; 6] {
    [rat(0, 1), rat(1, 2), rat(2, 3), rat(3, 4), rat(4, 5), rat(5, 6)]
}

pub fn six_sevenths() -> Rational {
    rat(6, 7)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct StandardCoefficient(Rational);

impl StandardCoefficient {
    pub fn new(value: Rational) -> Result<Self, PairError> {
        let big = value >= six_sevenths() && value <= int(1);
        if big || standard_small().contains(&value) {
            Ok(Self(value))
        } else {
            Err(PairError::NotStandard(format(&value)))
        }
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `d` with coefficient `(d-1)/d`; `None` for coefficients `>= 6/7`
    /// that are not of this form.
    pub fn denominator(&self) -> Option<u64> {
        let one_minus = int(1) - &self.0;
        if one_minus.is_zero() || !one_minus.numer().is_one() {
            return None;
        }
        one_minus.denom().try_into().ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FibreMark {
    Section,
    InFibre(u32),
    Multisection,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PairError {
    #[error("graph has no boundary curve C")]
    NoCurveC,
    #[error("coefficient {0} is not standard")]
    NotStandard(String),
    #[error("coefficient of C must be at least 6/7, got {0}")]
    SmallB(String),
    #[error("boundary component {0} is contracted on S")]
    ExceptionalComponent(VertexId),
    #[error("pair carries no fibration marking")]
    MissingFibration,
    #[error("degree against C does not depend on b")]
    Unbounded,
    #[error(transparent)]
    Intersection(#[from] IntersectionError),
}

#[derive(Debug, Clone)]
pub struct LogPair {
    pub graph: DualGraph,
    pub c: VertexId,
    pub b: Rational,
    pub boundary: BTreeMap<VertexId, Rational>,
    pub fibration: Option<BTreeMap<VertexId, FibreMark>>,
}

impl LogPair {
    pub fn new(
        graph: DualGraph,
        b: Rational,
        boundary: BTreeMap<VertexId, Rational>,
    ) -> Result<Self, PairError> {
        if b < six_sevenths() || b > int(1) {
            return Err(PairError::SmallB(format(&b)));
        }
        for (&v, q) in &boundary {
            if !standard_small().contains(q) {
                return Err(PairError::NotStandard(format(q)));
            }
            if graph.vertex(v).map_or(true, |x| x.class() == VertexClass::Black) {
                return Err(PairError::ExceptionalComponent(v));
            }
        }
        Self::unchecked(graph, b, boundary)
    }

    /// Skips the coefficient checks; used for b outside `[6/7, 1]` when
    /// solving for thresholds.
    pub fn unchecked(
        graph: DualGraph,
        b: Rational,
        mut boundary: BTreeMap<VertexId, Rational>,
    ) -> Result<Self, PairError> {
        let c = graph.curve_c().ok_or(PairError::NoCurveC)?;
        boundary.retain(|_, q| !q.is_zero());
        boundary.remove(&c);
        Ok(Self { graph, c, b, boundary, fibration: None })
    }

    pub fn with_fibration(mut self, f: BTreeMap<VertexId, FibreMark>) -> Self {
        self.fibration = Some(f);
        self
    }

    pub fn with_b(&self, b: Rational) -> Self {
        Self { b, ..self.clone() }
    }

    /// `bC + B1` as one coefficient map.
    pub fn full_boundary(&self) -> BTreeMap<VertexId, Rational> {
        let mut m = self.boundary.clone();
        m.insert(self.c, self.b.clone());
        m
    }

    pub fn log_canonical_divisor(&self) -> SurfaceDivisor {
        SurfaceDivisor::log_canonical(&self.full_boundary())
    }

    pub fn crepant(&self) -> Result<CrepantData, PairError> {
        Ok(intersection::crepant_pullback(&self.graph, &self.full_boundary())?)
    }

    pub fn curve_context(&self) -> CurveContext {
        CurveContext { coefficients: self.full_boundary(), node_on: Vec::new() }
    }

    /// `(K + B).C` on S.
    pub fn degree(&self) -> Result<Rational, PairError> {
        Ok(intersection::degree_vs_curve(&self.graph, &self.log_canonical_divisor(), self.c)?)
    }

    pub fn c_squared(&self) -> i64 {
        self.graph.weight(self.c)
    }

    /// Each black chain met by C, listed from the curve met by C, with its
    /// type. A component meeting the far end scales the type.
    pub fn singularities_on_c(&self) -> Vec<(Vec<VertexId>, CyclicQuotientType)> {
        let g = &self.graph;
        let mut out = Vec::new();
        for comp in g.components(&g.blacks()) {
            let Some(&start) = comp.iter().find(|&&v| g.mult(v, self.c) > 0) else {
                continue;
            };
            let Some(chain) = g.chain_from(&comp, start) else {
                continue;
            };
            let weights: Vec<i64> = chain.iter().map(|&v| g.weight(v)).collect();
            let (m, k) = singularity::hj_contract(&ResolutionChain { weights, d: 1 });
            let far = *chain.last().unwrap();
            let d = self
                .boundary
                .iter()
                .filter(|(&u, _)| g.mult(u, far) > 0)
                .filter_map(|(_, q)| StandardCoefficient::new(q.clone()).ok()?.denominator())
                .max()
                .unwrap_or(1);
            let t = CyclicQuotientType { m: d * m, k: d * k, d };
            out.push((chain, t));
        }
        out
    }
}

/// `D`: coefficients `>= 6/7` rounded up to 1.
pub fn compute_d(p: &LogPair) -> BTreeMap<VertexId, Rational> {
    p.full_boundary()
        .into_iter()
        .map(|(v, q)| if q >= six_sevenths() { (v, int(1)) } else { (v, q) })
        .collect()
}

/// Tracked divisors with log discrepancy at most 1/7.
pub fn delta(p: &LogPair) -> Result<usize, PairError> {
    let crep = p.crepant()?;
    let t = six_sevenths();
    let on_boundary = p.full_boundary().values().filter(|q| **q >= t).count();
    let exceptional = crep.coefficients.values().filter(|q| **q >= t).count();
    Ok(on_boundary + exceptional)
}

/// `-(K+B)` nef, tested against C.
pub fn check_ex1(p: &LogPair) -> Result<bool, PairError> {
    Ok(!p.degree()?.is_positive())
}

/// Elliptic case: a singular point on C or a second boundary component.
pub fn check_ex2_elliptic(p: &LogPair) -> bool {
    let g = &p.graph;
    !p.boundary.is_empty() || g.blacks().iter().any(|&v| g.mult(v, p.c) > 0)
}

/// Every exceptional divisor and every component other than those with
/// coefficient `>= 6/7` has log discrepancy above 1/7.
pub fn check_ex3(p: &LogPair) -> Result<bool, PairError> {
    let t = six_sevenths();
    let crep = p.crepant()?;
    Ok(crep.coefficients.values().all(|e| *e < t) && p.boundary.values().all(|q| *q < t))
}

/// Picard number one: the black curves number `rho(S^min) - 1`.
pub fn check_ex4(p: &LogPair) -> bool {
    p.graph.blacks().len() as u32 + 1 == 2 + p.graph.blowup_count()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExReport {
    pub ex1: bool,
    pub ex2: bool,
    pub ex3: bool,
    pub ex4: bool,
    pub violations: Vec<String>,
}

impl ExReport {
    pub fn all(&self) -> bool {
        self.ex1 && self.ex2 && self.ex3 && self.ex4 && self.violations.is_empty()
    }
}

pub fn ex_report(p: &LogPair) -> Result<ExReport, PairError> {
    let mut violations: Vec<String> = p
        .graph
        .validate_curve_constraints(&p.curve_context())
        .iter()
        .map(ToString::to_string)
        .collect();
    if let Err(e) = p.crepant()?.check_log_canonical() {
        violations.push(e.to_string());
    }
    violations.extend(lemma22_bounds(p)?);
    Ok(ExReport {
        ex1: check_ex1(p)?,
        ex2: check_ex2_elliptic(p),
        ex3: check_ex3(p)?,
        ex4: check_ex4(p),
        violations,
    })
}

/// Both sides of the section/fibre count: `(#black sections - 1,
/// #white fibre curves - #singular fibres)`.
pub fn zhang_count(p: &LogPair) -> Result<(i64, i64), PairError> {
    let f = p.fibration.as_ref().ok_or(PairError::MissingFibration)?;
    let g = &p.graph;
    let horizontal = g
        .blacks()
        .into_iter()
        .filter(|v| matches!(f.get(v), Some(FibreMark::Section | FibreMark::Multisection)))
        .count() as i64;
    let mut fibres: BTreeMap<u32, usize> = BTreeMap::new();
    let mut whites = 0i64;
    for v in g.ids() {
        if let Some(FibreMark::InFibre(i)) = f.get(&v) {
            *fibres.entry(*i).or_insert(0) += 1;
            if g.weight(v) == -1 {
                whites += 1;
            }
        }
    }
    let singular = fibres.values().filter(|&&n| n > 1).count() as i64;
    Ok((horizontal - 1, whites - singular))
}

/// Largest `b` with `(K + bC + B1).C <= 0`. The degree is affine in `b`.
pub fn max_b(p: &LogPair) -> Result<Rational, PairError> {
    let d0 = p.with_b(int(0)).degree()?;
    let d1 = p.with_b(int(1)).degree()?;
    if d1 == d0 {
        return Err(PairError::Unbounded);
    }
    Ok(-&d0 / (d1 - &d0))
}

/// Violations of: `C^2 >= 3`; two points on C force `C^2 >= 6`; each
/// point on C has mld at least `1 - C^2/7`.
pub fn lemma22_bounds(p: &LogPair) -> Result<Vec<String>, PairError> {
    let mut out = Vec::new();
    let c2 = p.c_squared();
    if c2 < 3 {
        out.push(format!("C^2 = {c2} < 3"));
    }
    let sing = p.singularities_on_c();
    if sing.len() >= 2 && c2 < 6 {
        out.push(format!("{} singular points on C with C^2 = {c2} < 6", sing.len()));
    }
    let crep = p.crepant()?;
    let floor = singularity::mld_floor(c2);
    for (chain, _) in &sing {
        let mld = int(1) - crep.get(chain[0]);
        if mld < floor {
            out.push(format!("mld {} below 1 - C^2/7 = {}", format(&mld), format(&floor)));
        }
    }
    Ok(out)
}

/// `(6 - C^2) m <= 7 - k`: EX1 for one point of type `[m,k]` on C.
pub fn type_inequality(c2: i64, t: &CyclicQuotientType) -> bool {
    (6 - c2) * t.m as i64 <= 7 - t.k as i64
}

/// Role-aware sanity: exactly one C.
pub fn has_unique_c(g: &DualGraph) -> bool {
    g.vertices().filter(|v| v.role == VertexRole::BoundaryCurveC).count() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> (DualGraph, VertexId, VertexId, VertexId) {
        let mut g = DualGraph::new();
        let c = g.add_vertex("C", 8, 1, false, VertexRole::BoundaryCurveC).unwrap();
        let s = g.add_vertex("Sigma", -2, 0, false, VertexRole::MinimalSection).unwrap();
        let f = g.add_vertex("F", 0, 0, false, VertexRole::Fibre).unwrap();
        g.add_edge(c, f, 2).unwrap();
        g.add_edge(s, f, 1).unwrap();
        (g, c, s, f)
    }

    #[test]
    fn standard_coefficients() {
        assert!(StandardCoefficient::new(rat(1, 2)).is_ok());
        assert!(StandardCoefficient::new(rat(13, 15)).is_ok());
        assert!(StandardCoefficient::new(rat(1, 3)).is_err());
        assert_eq!(StandardCoefficient::new(rat(3, 4)).unwrap().denominator(), Some(4));
        assert_eq!(StandardCoefficient::new(rat(13, 15)).unwrap().denominator(), None);
    }

    #[test]
    fn seed_predicates() {
        let (g, _, s, f) = f2();
        let p = LogPair::new(g, six_sevenths(), BTreeMap::new()).unwrap();
        assert!(check_ex1(&p).unwrap());
        assert!(!check_ex2_elliptic(&p));
        assert!(check_ex4(&p));
        assert_eq!(delta(&p).unwrap(), 1);
        let fib = BTreeMap::from([
            (p.c, FibreMark::Multisection),
            (s, FibreMark::Section),
            (f, FibreMark::InFibre(0)),
        ]);
        assert_eq!(zhang_count(&p.clone().with_fibration(fib)).unwrap(), (0, 0));
        assert_eq!(zhang_count(&p), Err(PairError::MissingFibration));
    }

    #[test]
    fn compute_d_rounds_c() {
        let (g, c, _, f) = f2();
        let p = LogPair::new(g, rat(9, 10), BTreeMap::from([(f, rat(1, 2))])).unwrap();
        let d = compute_d(&p);
        assert_eq!(d[&c], int(1));
        assert_eq!(d[&f], rat(1, 2));
    }

    #[test]
    fn cone_row() {
        let (g, _, _, f) = f2();
        let p = LogPair::new(g, six_sevenths(), BTreeMap::from([(f, rat(1, 2))])).unwrap();
        assert_eq!(max_b(&p).unwrap(), rat(7, 8));
        assert!(check_ex2_elliptic(&p));
    }

    #[test]
    fn type_inequality_values() {
        let t = |m, k| CyclicQuotientType::new(m, k).unwrap();
        assert!(type_inequality(6, &t(50, 1)));
        assert!(type_inequality(5, &t(6, 1)));
        assert!(!type_inequality(5, &t(7, 1)));
        assert!(type_inequality(3, &t(2, 1)));
        assert!(!type_inequality(3, &t(3, 1)));
    }

    #[test]
    fn small_c_squared_flagged() {
        let mut g = DualGraph::new();
        g.add_vertex("C", 2, 1, false, VertexRole::BoundaryCurveC).unwrap();
        let p = LogPair::new(g, six_sevenths(), BTreeMap::new()).unwrap();
        assert_eq!(lemma22_bounds(&p).unwrap(), vec!["C^2 = 2 < 3".to_string()]);
    }
}

//! Weighted dual graphs of curve configurations and the blow-up calculus.
//!
//! A vertex is a curve, its weight is the self-intersection number, and an
//! edge carries the total intersection number of its two curves. Graphs are
//! values: every operation returns a new graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VertexRole {
    BoundaryCurveC,
    BoundaryComponent(u32),
    Exceptional,
    MinimalSection,
    Fibre,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    Black,
    White,
    Square,
}

impl VertexClass {
    pub fn of_weight(w: i64) -> Self {
        match w {
            w if w <= -2 => VertexClass::Black,
            -1 => VertexClass::White,
            _ => VertexClass::Square,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: VertexId,
    pub label: String,
    pub weight: i64,
    pub genus: u32,
    pub nodal: bool,
    pub role: VertexRole,
}

impl Vertex {
    pub fn class(&self) -> VertexClass {
        VertexClass::of_weight(self.weight)
    }

    /// Arithmetic genus; a nodal rational curve counts as 1.
    pub fn arithmetic_genus(&self) -> u32 {
        if self.nodal {
            1
        } else {
            self.genus
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("vertex cannot be both genus 1 and nodal")]
    GenusAndNode,
    #[error("self-loop on {0}; record a node with the nodal flag instead")]
    SelfLoop(VertexId),
    #[error("edge multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("blow-up centre must have 1 to 3 distinct vertices, got {0}")]
    BadCentre(usize),
    #[error("vertices {0} and {1} are not adjacent")]
    MissingEdge(VertexId, VertexId),
    #[error("{0} is not a smooth rational (-1)-curve")]
    NotContractible(VertexId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DualGraph {
    vertices: BTreeMap<VertexId, Vertex>,
    edges: BTreeMap<(VertexId, VertexId), u32>,
    blowup_count: u32,
    next_id: u32,
}

fn key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl DualGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(
        &mut self,
        label: &str,
        weight: i64,
        genus: u32,
        nodal: bool,
        role: VertexRole,
    ) -> Result<VertexId, GraphError> {
        if genus == 1 && nodal {
            return Err(GraphError::GenusAndNode);
        }
        if self.find(label).is_some() {
            return Err(GraphError::DuplicateLabel(label.to_string()));
        }
        let id = VertexId(self.next_id);
        self.next_id += 1;
        self.vertices.insert(
            id,
            Vertex { id, label: label.to_string(), weight, genus, nodal, role },
        );
        Ok(id)
    }

    /// Adds `mult` to the intersection number of `a` and `b`.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId, mult: u32) -> Result<(), GraphError> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if mult == 0 {
            return Err(GraphError::ZeroMultiplicity);
        }
        *self.edges.entry(key(a, b)).or_insert(0) += mult;
        Ok(())
    }

    pub fn set_role(&mut self, v: VertexId, role: VertexRole) -> Result<(), GraphError> {
        self.vertices.get_mut(&v).ok_or(GraphError::UnknownVertex(v))?.role = role;
        Ok(())
    }

    pub fn set_blowup_count(&mut self, n: u32) {
        self.blowup_count = n;
    }

    fn check(&self, v: VertexId) -> Result<(), GraphError> {
        if self.vertices.contains_key(&v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn blowup_count(&self) -> u32 {
        self.blowup_count
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, v: VertexId) -> Option<&Vertex> {
        self.vertices.get(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    pub fn ids(&self) -> Vec<VertexId> {
        self.vertices.keys().copied().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, u32)> + '_ {
        self.edges.iter().map(|(&(a, b), &m)| (a, b, m))
    }

    pub fn find(&self, label: &str) -> Option<VertexId> {
        self.vertices.values().find(|v| v.label == label).map(|v| v.id)
    }

    pub fn label(&self, v: VertexId) -> &str {
        self.vertices.get(&v).map_or("?", |x| x.label.as_str())
    }

    /// Panics on unknown ids; callers hold ids obtained from this graph.
    pub fn weight(&self, v: VertexId) -> i64 {
        self.vertices[&v].weight
    }

    pub fn mult(&self, a: VertexId, b: VertexId) -> u32 {
        if a == b {
            return 0;
        }
        self.edges.get(&key(a, b)).copied().unwrap_or(0)
    }

    /// Intersection number, with the weight on the diagonal.
    pub fn intersection(&self, a: VertexId, b: VertexId) -> i64 {
        if a == b {
            self.weight(a)
        } else {
            i64::from(self.mult(a, b))
        }
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        self.edges
            .iter()
            .filter_map(|(&(a, b), &m)| {
                if a == v {
                    Some((b, m))
                } else if b == v {
                    Some((a, m))
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn curve_c(&self) -> Option<VertexId> {
        self.vertices
            .values()
            .find(|v| v.role == VertexRole::BoundaryCurveC)
            .map(|v| v.id)
    }

    pub fn with_class(&self, class: VertexClass) -> Vec<VertexId> {
        self.vertices
            .values()
            .filter(|v| v.class() == class)
            .map(|v| v.id)
            .collect()
    }

    pub fn blacks(&self) -> Vec<VertexId> {
        self.with_class(VertexClass::Black)
    }

    pub fn whites(&self) -> Vec<VertexId> {
        self.with_class(VertexClass::White)
    }

    pub fn squares(&self) -> Vec<VertexId> {
        self.with_class(VertexClass::Square)
    }

    /// Blows up the common point of the curves in `s`. The new vertex gets
    /// role `Exceptional`; its id is returned alongside the graph.
    ///
    /// For three curves the caller vouches that they are concurrent.
    pub fn blow_up_subgraph(&self, s: &[VertexId]) -> Result<(DualGraph, VertexId), GraphError> {
        let set: BTreeSet<VertexId> = s.iter().copied().collect();
        if set.is_empty() || set.len() > 3 || set.len() != s.len() {
            return Err(GraphError::BadCentre(s.len()));
        }
        for &v in &set {
            self.check(v)?;
        }
        let list: Vec<VertexId> = set.iter().copied().collect();
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                if self.mult(a, b) == 0 {
                    return Err(GraphError::MissingEdge(a, b));
                }
            }
        }
        let mut g = self.clone();
        for &v in &list {
            g.vertices.get_mut(&v).unwrap().weight -= 1;
        }
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                let k = key(a, b);
                let m = g.edges[&k] - 1;
                if m == 0 {
                    g.edges.remove(&k);
                } else {
                    g.edges.insert(k, m);
                }
            }
        }
        let mut n = g.next_id;
        let label = loop {
            let l = format!("E{n}");
            if g.find(&l).is_none() {
                break l;
            }
            n += 1;
        };
        let e = g.add_vertex(&label, -1, 0, false, VertexRole::Exceptional)?;
        for &v in &list {
            g.edges.insert(key(v, e), 1);
        }
        g.blowup_count += 1;
        Ok((g, e))
    }

    pub fn contract_white(&self, v: VertexId) -> Result<DualGraph, GraphError> {
        let x = self.vertices.get(&v).ok_or(GraphError::UnknownVertex(v))?;
        if x.weight != -1 || x.genus != 0 || x.nodal {
            return Err(GraphError::NotContractible(v));
        }
        let nb = self.neighbors(v);
        let mut g = self.clone();
        g.vertices.remove(&v);
        g.edges.retain(|&(a, b), _| a != v && b != v);
        for (i, &(a, ma)) in nb.iter().enumerate() {
            g.vertices.get_mut(&a).unwrap().weight += i64::from(ma * ma);
            for &(b, mb) in &nb[i + 1..] {
                *g.edges.entry(key(a, b)).or_insert(0) += ma * mb;
            }
        }
        g.blowup_count = g.blowup_count.saturating_sub(1);
        Ok(g)
    }

    /// Connected components of the subgraph induced on `subset`, each sorted.
    pub fn components(&self, subset: &[VertexId]) -> Vec<Vec<VertexId>> {
        let mut left: BTreeSet<VertexId> = subset.iter().copied().collect();
        let mut out = Vec::new();
        while let Some(&s) = left.iter().next() {
            left.remove(&s);
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for (y, _) in self.neighbors(x) {
                    if left.remove(&y) {
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }

    /// Orders `comp` as a chain of simple edges starting at `start`, or
    /// returns `None` if it is not such a chain with `start` at an end.
    pub fn chain_from(&self, comp: &[VertexId], start: VertexId) -> Option<Vec<VertexId>> {
        let inside = |v: VertexId| -> Vec<(VertexId, u32)> {
            self.neighbors(v).into_iter().filter(|(u, _)| comp.contains(u)).collect()
        };
        for &v in comp {
            let nb = inside(v);
            if nb.len() > 2 || nb.iter().any(|&(_, m)| m > 1) {
                return None;
            }
        }
        if !comp.contains(&start) || inside(start).len() > 1 {
            return None;
        }
        let mut order = vec![start];
        let mut prev = None;
        let mut cur = start;
        while let Some((nx, _)) = inside(cur).into_iter().find(|&(u, _)| Some(u) != prev) {
            prev = Some(cur);
            cur = nx;
            order.push(cur);
        }
        (order.len() == comp.len()).then_some(order)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.canonical_form_tagged(&BTreeMap::new())
    }

    /// Canonical form with an extra per-vertex tag (a boundary coefficient,
    /// say) folded into the vertex colours.
    pub fn canonical_form_tagged(&self, tags: &BTreeMap<VertexId, String>) -> CanonicalForm {
        canon::canonical_labelling(self, tags).0
    }

    /// A vertex map onto `other` preserving weights, genera, C and edge
    /// multiplicities, if one exists.
    pub fn isomorphism_to(&self, other: &DualGraph) -> Option<BTreeMap<VertexId, VertexId>> {
        let none = BTreeMap::new();
        let (fa, oa) = canon::canonical_labelling(self, &none);
        let (fb, ob) = canon::canonical_labelling(other, &none);
        (fa == fb).then(|| oa.into_iter().zip(ob).collect())
    }

    /// Renames vertices; labels not in `names` are kept.
    pub fn relabelled(&self, names: &BTreeMap<VertexId, String>) -> Result<DualGraph, GraphError> {
        let mut g = self.clone();
        for (v, n) in names {
            g.vertices.get_mut(v).ok_or(GraphError::UnknownVertex(*v))?.label = n.clone();
        }
        let mut seen = BTreeSet::new();
        if let Some(v) = g.vertices.values().find(|v| !seen.insert(v.label.clone())) {
            return Err(GraphError::DuplicateLabel(v.label.clone()));
        }
        Ok(g)
    }

    pub fn validate_curve_constraints(&self, ctx: &CurveContext) -> Vec<Violation> {
        let mut out = Vec::new();
        let Some(c) = self.curve_c() else {
            return out;
        };
        let coef = |v: VertexId| ctx.coefficients.get(&v).cloned().unwrap_or_else(rational::zero);
        let is_component = |v: VertexId| coef(v) > rational::zero();

        if self.vertices[&c].nodal {
            for &v in &ctx.node_on {
                if self.vertex(v).is_some_and(|x| x.class() == VertexClass::Black) {
                    out.push(Violation::NodeAtSingularPoint(v));
                } else if is_component(v) {
                    out.push(Violation::NodeOnComponent(v));
                }
            }
        }

        let half = rational::rat(1, 2);
        for (v, m) in self.neighbors(c) {
            if m >= 2 && self.vertices[&v].class() != VertexClass::Black && is_component(v) {
                if !(m == 2 && coef(v) == half) {
                    out.push(Violation::TangentComponent(v, m));
                }
            }
        }

        let blacks = self.blacks();
        for comp in self.components(&blacks) {
            let touching: Vec<(VertexId, u32)> = comp
                .iter()
                .map(|&v| (v, self.mult(v, c)))
                .filter(|&(_, m)| m > 0)
                .collect();
            match touching.as_slice() {
                [] => continue,
                [(v, 1)] => match self.chain_from(&comp, *v) {
                    None => out.push(Violation::NotChainEnd(*v)),
                    Some(chain) => {
                        let far = *chain.last().unwrap();
                        let through: Vec<VertexId> = self
                            .ids()
                            .into_iter()
                            .filter(|&u| u != c && !comp.contains(&u) && is_component(u))
                            .filter(|&u| comp.iter().any(|&x| self.mult(u, x) > 0))
                            .collect();
                        for &u in &through {
                            let hits: Vec<VertexId> =
                                comp.iter().copied().filter(|&x| self.mult(u, x) > 0).collect();
                            if hits != [far] || self.mult(u, far) != 1 {
                                out.push(Violation::ComponentNotAtFarEnd(u));
                            }
                        }
                        if through.len() > 1 {
                            out.push(Violation::TwoComponentsAtPoint(through));
                        }
                    }
                },
                [(v, m)] => out.push(Violation::NonNormalMeeting(*v, *m)),
                _ => out.push(Violation::SeveralPoints(touching.iter().map(|t| t.0).collect())),
            }
        }
        out
    }

    /// Graphviz rendering: black vertices filled, white unfilled, squares as
    /// boxes; a multiplicity-n edge becomes n parallel edges.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "graph \"{}\" {{", name.replace('"', "'"));
        for v in self.vertices.values() {
            let (shape, style) = match v.class() {
                VertexClass::Black => ("circle", "filled"),
                VertexClass::White => ("circle", "solid"),
                VertexClass::Square => ("box", "solid"),
            };
            let mut label = format!("{}\\n{}", v.label, v.weight);
            if v.genus > 0 {
                let _ = write!(label, " g{}", v.genus);
            }
            if v.nodal {
                label.push_str(" nodal");
            }
            let _ = writeln!(
                s,
                "  {} [label=\"{}\", shape={}, style={}, fillcolor=black, fontcolor={}];",
                v.id.0,
                label,
                shape,
                style,
                if v.class() == VertexClass::Black { "white" } else { "black" }
            );
        }
        for (a, b, m) in self.edges() {
            for _ in 0..m {
                let _ = writeln!(s, "  {} -- {};", a.0, b.0);
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_record(&self) -> GraphRecord {
        GraphRecord {
            blowup_count: self.blowup_count,
            vertices: self
                .vertices
                .values()
                .map(|v| VertexRecord {
                    label: v.label.clone(),
                    weight: v.weight,
                    genus: v.genus,
                    nodal: v.nodal,
                    role: v.role,
                })
                .collect(),
            edges: self
                .edges()
                .map(|(a, b, m)| EdgeRecord {
                    a: self.label(a).to_string(),
                    b: self.label(b).to_string(),
                    mult: m,
                })
                .collect(),
        }
    }

    pub fn from_record(r: &GraphRecord) -> Result<DualGraph, GraphError> {
        let mut g = DualGraph::new();
        for v in &r.vertices {
            g.add_vertex(&v.label, v.weight, v.genus, v.nodal, v.role)?;
        }
        let look = |g: &DualGraph, l: &str| {
            g.find(l).ok_or_else(|| GraphError::DuplicateLabel(format!("missing {l}")))
        };
        for e in &r.edges {
            let a = look(&g, &e.a)?;
            let b = look(&g, &e.b)?;
            g.add_edge(a, b, e.mult)?;
        }
        g.blowup_count = r.blowup_count;
        Ok(g)
    }
}

/// Facts about a boundary that the graph alone does not carry.
#[derive(Debug, Clone, Default)]
pub struct CurveContext {
    pub coefficients: BTreeMap<VertexId, Rational>,
    /// Curves passing through the node of C, when C is nodal.
    pub node_on: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NodeAtSingularPoint(VertexId),
    NodeOnComponent(VertexId),
    TangentComponent(VertexId, u32),
    TwoComponentsAtPoint(Vec<VertexId>),
    ComponentNotAtFarEnd(VertexId),
    NotChainEnd(VertexId),
    NonNormalMeeting(VertexId, u32),
    SeveralPoints(Vec<VertexId>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NodeAtSingularPoint(v) => write!(f, "node of C at a singular point ({v})"),
            Violation::NodeOnComponent(v) => write!(f, "node of C on boundary component {v}"),
            Violation::TangentComponent(v, m) => {
                write!(f, "component {v} meets C with multiplicity {m} at a smooth point")
            }
            Violation::TwoComponentsAtPoint(vs) => {
                write!(f, "{} boundary components through one point of C", vs.len())
            }
            Violation::ComponentNotAtFarEnd(v) => {
                write!(f, "component {v} does not meet the far end of the chain normally")
            }
            Violation::NotChainEnd(v) => {
                write!(f, "C meets {v}, which is not an end of a chain")
            }
            Violation::NonNormalMeeting(v, m) => {
                write!(f, "C meets exceptional curve {v} with multiplicity {m}")
            }
            Violation::SeveralPoints(vs) => {
                write!(f, "C meets one exceptional tree in {} curves", vs.len())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub label: String,
    pub weight: i64,
    pub genus: u32,
    pub nodal: bool,
    pub role: VertexRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub a: String,
    pub b: String,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub blowup_count: u32,
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CanonicalForm {
    vertices: Vec<(bool, i64, u32, bool, String)>,
    edges: Vec<(u32, u32, u32)>,
}

mod canon {
    //! Colour refinement plus individualisation; the minimum leaf encoding
    //! over the whole search tree is the canonical form.

    use super::*;

    type Key = (bool, i64, u32, bool, String);

    struct Ctx {
        keys: Vec<Key>,
        adj: Vec<Vec<(usize, u32)>>,
    }

    fn rerank<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
        let distinct: BTreeSet<T> = sigs.iter().cloned().collect();
        let rank: BTreeMap<T, u32> =
            distinct.into_iter().enumerate().map(|(i, s)| (s, i as u32)).collect();
        sigs.iter().map(|s| rank[s]).collect()
    }

    fn count(colors: &[u32]) -> usize {
        colors.iter().collect::<BTreeSet<_>>().len()
    }

    fn refine(ctx: &Ctx, mut colors: Vec<u32>) -> Vec<u32> {
        loop {
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..colors.len())
                .map(|i| {
                    let mut nb: Vec<(u32, u32)> =
                        ctx.adj[i].iter().map(|&(j, m)| (colors[j], m)).collect();
                    nb.sort();
                    (colors[i], nb)
                })
                .collect();
            let next = rerank(&sigs);
            if count(&next) == count(&colors) {
                return next;
            }
            colors = next;
        }
    }

    fn encode(ctx: &Ctx, colors: &[u32]) -> (CanonicalForm, Vec<usize>) {
        let n = colors.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| colors[i]);
        let pos: Vec<u32> = {
            let mut p = vec![0; n];
            for (k, &i) in order.iter().enumerate() {
                p[i] = k as u32;
            }
            p
        };
        let mut edges: Vec<(u32, u32, u32)> = Vec::new();
        for i in 0..n {
            for &(j, m) in &ctx.adj[i] {
                if i < j {
                    let (a, b) = (pos[i].min(pos[j]), pos[i].max(pos[j]));
                    edges.push((a, b, m));
                }
            }
        }
        edges.sort();
        let form = CanonicalForm {
            vertices: order.iter().map(|&i| ctx.keys[i].clone()).collect(),
            edges,
        };
        (form, order)
    }

    type Best = Option<(CanonicalForm, Vec<usize>)>;

    fn search(ctx: &Ctx, colors: Vec<u32>, best: &mut Best) {
        let colors = refine(ctx, colors);
        let n = colors.len();
        let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
        for &c in &colors {
            *sizes.entry(c).or_insert(0) += 1;
        }
        let Some((&cell, _)) = sizes.iter().find(|(_, &s)| s > 1) else {
            let enc = encode(ctx, &colors);
            if best.as_ref().map_or(true, |b| enc.0 < b.0) {
                *best = Some(enc);
            }
            return;
        };
        for pick in (0..n).filter(|&i| colors[i] == cell) {
            let split: Vec<u32> = (0..n)
                .map(|j| 2 * colors[j] + u32::from(colors[j] == cell && j != pick))
                .collect();
            search(ctx, rerank(&split), best);
        }
    }

    /// Canonical form and the vertex order realising it.
    pub(super) fn canonical_labelling(
        g: &DualGraph,
        tags: &BTreeMap<VertexId, String>,
    ) -> (CanonicalForm, Vec<VertexId>) {
        let ids = g.ids();
        let index: BTreeMap<VertexId, usize> =
            ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let keys: Vec<Key> = ids
            .iter()
            .map(|v| {
                let x = g.vertex(*v).unwrap();
                (
                    x.role == VertexRole::BoundaryCurveC,
                    x.weight,
                    x.genus,
                    x.nodal,
                    tags.get(v).cloned().unwrap_or_default(),
                )
            })
            .collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (a, b, m) in g.edges() {
            adj[index[&a]].push((index[&b], m));
            adj[index[&b]].push((index[&a], m));
        }
        let ctx = Ctx { keys, adj };
        let start = rerank(&ctx.keys);
        let mut best = None;
        search(&ctx, start, &mut best);
        match best {
            Some((form, order)) => (form, order.into_iter().map(|i| ids[i]).collect()),
            None => (CanonicalForm { vertices: Vec::new(), edges: Vec::new() }, Vec::new()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed() -> (DualGraph, VertexId, VertexId, VertexId) {
        let mut g = DualGraph::new();
        let c = g.add_vertex("C", 8, 1, false, VertexRole::BoundaryCurveC).unwrap();
        let s = g.add_vertex("Sigma", -2, 0, false, VertexRole::MinimalSection).unwrap();
        let f = g.add_vertex("F", 0, 0, false, VertexRole::Fibre).unwrap();
        g.add_edge(c, f, 2).unwrap();
        g.add_edge(s, f, 1).unwrap();
        (g, c, s, f)
    }

    #[test]
    fn single_vertex_blow_up() {
        let (g, _, s, _) = seed();
        let (h, e) = g.blow_up_subgraph(&[s]).unwrap();
        assert_eq!(h.weight(s), -3);
        assert_eq!(h.weight(e), -1);
        assert_eq!(h.mult(s, e), 1);
        assert_eq!(h.blowup_count(), 1);
    }

    #[test]
    fn tangency_then_triangle() {
        let (g, c, _, f) = seed();
        let (g1, e1) = g.blow_up_subgraph(&[c, f]).unwrap();
        assert_eq!((g1.weight(c), g1.weight(f), g1.mult(c, f)), (7, -1, 1));
        assert_eq!((g1.mult(e1, c), g1.mult(e1, f)), (1, 1));
        let (g2, e2) = g1.blow_up_subgraph(&[c, f, e1]).unwrap();
        assert_eq!((g2.weight(c), g2.weight(f), g2.weight(e1)), (6, -2, -2));
        assert_eq!(g2.mult(c, f) + g2.mult(c, e1) + g2.mult(f, e1), 0);
        assert_eq!([c, f, e1].map(|v| g2.mult(v, e2)), [1, 1, 1]);
        assert_eq!(g2.len(), 3 + 2);
    }

    #[test]
    fn missing_edge_rejected() {
        let (g, c, s, _) = seed();
        assert_eq!(g.blow_up_subgraph(&[c, s]).unwrap_err(), GraphError::MissingEdge(c, s));
        assert!(matches!(g.blow_up_subgraph(&[]), Err(GraphError::BadCentre(0))));
    }

    #[test]
    fn contract_inverts_blow_up() {
        let (g, c, _, f) = seed();
        let (g1, e1) = g.blow_up_subgraph(&[c, f]).unwrap();
        let (g2, e2) = g1.blow_up_subgraph(&[c, f, e1]).unwrap();
        let back = g2.contract_white(e2).unwrap();
        assert_eq!(back.canonical_form(), g1.canonical_form());
        let back = back.contract_white(e1).unwrap();
        assert_eq!(back.canonical_form(), g.canonical_form());
        assert_eq!(back.blowup_count(), 0);
        assert_eq!(g.contract_white(c), Err(GraphError::NotContractible(c)));
    }

    #[test]
    fn contraction_joins_neighbours() {
        let mut g = DualGraph::new();
        let a = g.add_vertex("a", -2, 0, false, VertexRole::Other).unwrap();
        let b = g.add_vertex("b", -3, 0, false, VertexRole::Other).unwrap();
        let w = g.add_vertex("w", -1, 0, false, VertexRole::Other).unwrap();
        g.add_edge(a, w, 1).unwrap();
        g.add_edge(b, w, 1).unwrap();
        let h = g.contract_white(w).unwrap();
        assert_eq!((h.weight(a), h.weight(b), h.mult(a, b)), (-1, -2, 1));
    }

    #[test]
    fn chain_orientation_matters() {
        let build = |w1: i64, w2: i64| {
            let mut g = DualGraph::new();
            let c = g.add_vertex("C", 5, 1, false, VertexRole::BoundaryCurveC).unwrap();
            let x = g.add_vertex("x", w1, 0, false, VertexRole::Other).unwrap();
            let y = g.add_vertex("y", w2, 0, false, VertexRole::Other).unwrap();
            g.add_edge(c, x, 1).unwrap();
            g.add_edge(x, y, 1).unwrap();
            g
        };
        assert_ne!(build(-2, -3).canonical_form(), build(-3, -2).canonical_form());
    }

    #[test]
    fn genus_and_node_exclusive() {
        let mut g = DualGraph::new();
        assert_eq!(
            g.add_vertex("C", 1, 1, true, VertexRole::BoundaryCurveC),
            Err(GraphError::GenusAndNode)
        );
    }

    #[test]
    fn curve_constraint_rules() {
        let mut g = DualGraph::new();
        let c = g.add_vertex("C", 6, 1, false, VertexRole::BoundaryCurveC).unwrap();
        let e: Vec<VertexId> = (0..3)
            .map(|i| g.add_vertex(&format!("e{i}"), -2, 0, false, VertexRole::Other).unwrap())
            .collect();
        g.add_edge(e[0], e[1], 1).unwrap();
        g.add_edge(e[1], e[2], 1).unwrap();
        let mut end = g.clone();
        end.add_edge(c, e[0], 1).unwrap();
        assert!(end.validate_curve_constraints(&CurveContext::default()).is_empty());
        let mut mid = g.clone();
        mid.add_edge(c, e[1], 1).unwrap();
        assert_eq!(
            mid.validate_curve_constraints(&CurveContext::default()),
            vec![Violation::NotChainEnd(e[1])]
        );

        let mut t = DualGraph::new();
        let c = t.add_vertex("C", 6, 1, false, VertexRole::BoundaryCurveC).unwrap();
        let w = t.add_vertex("C2", -1, 0, false, VertexRole::BoundaryComponent(2)).unwrap();
        t.add_edge(c, w, 2).unwrap();
        let mut ctx = CurveContext::default();
        ctx.coefficients.insert(w, rational::rat(1, 2));
        assert!(t.validate_curve_constraints(&ctx).is_empty());
        ctx.coefficients.insert(w, rational::rat(2, 3));
        assert_eq!(t.validate_curve_constraints(&ctx), vec![Violation::TangentComponent(w, 2)]);
    }

    #[test]
    fn record_round_trip() {
        let (g, c, _, f) = seed();
        let (g1, _) = g.blow_up_subgraph(&[c, f]).unwrap();
        let back = DualGraph::from_record(&g1.to_record()).unwrap();
        assert_eq!(back.canonical_form(), g1.canonical_form());
        assert_eq!(back.blowup_count(), 1);
    }

    #[test]
    fn dot_has_parallel_edges() {
        let (g, ..) = seed();
        let dot = g.to_dot("seed");
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.contains("shape=box"));
        assert!(dot.contains("style=filled"));
    }
}

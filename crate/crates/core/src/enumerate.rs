//! Exhaustive search from the ruled surface F2.
//!
//! States are minimal resolutions built by blow-ups on fibres of the
//! ruling, tracked as dual graphs with a fibration marking. The search is
//! breadth-first by number of blow-ups with canonical-form memoisation;
//! every successor is checked against the feasibility rules at `b = 6/7`
//! with no further boundary, which is the weakest admissible choice.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{CanonicalForm, DualGraph, GraphError, VertexClass, VertexId, VertexRole};
use crate::intersection;
use crate::pair::{self, FibreMark, LogPair, PairError};
use crate::rational::{format, int, rat, Rational};

/// Fresh fibres cost at least two blow-ups on C each, and `C^2 >= 3`.
pub const MAX_FIBRES: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FibreStart {
    /// Two blow-ups at a tangency of C with the fibre.
    Tangent,
    /// Two blow-ups at a transversal point of C and the fibre.
    Transversal,
    /// Two blow-ups at a point of the fibre off C.
    OffCurve,
}

impl fmt::Display for FibreStart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FibreStart::Tangent => "(I)",
            FibreStart::Transversal => "(II)",
            FibreStart::OffCurve => "(III)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    NewFibre { fibre: u32, start: FibreStart },
    /// Blow up the point where C meets a white curve.
    Type1 { white: String },
    /// Blow up the point where a white curve meets a black one.
    Type2 { white: String, black: String },
    /// Blow up a general point of a white curve.
    WhiteVertex { white: String },
}

impl Move {
    pub fn kind(&self) -> String {
        match self {
            Move::NewFibre { start, .. } => format!("new fibre {start}"),
            Move::Type1 { .. } => "type-1".into(),
            Move::Type2 { .. } => "type-2".into(),
            Move::WhiteVertex { .. } => "white vertex".into(),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::NewFibre { fibre, start } => write!(f, "F{fibre}{start}"),
            Move::Type1 { white } => write!(f, "C*{white}"),
            Move::Type2 { white, black } => write!(f, "{white}*{black}"),
            Move::WhiteVertex { white } => write!(f, "{white}*"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchState {
    pub graph: DualGraph,
    pub c: VertexId,
    pub sigma: VertexId,
    pub fibration: BTreeMap<VertexId, FibreMark>,
    pub fibres: u32,
    pub moves: Vec<Move>,
}

impl SearchState {
    pub fn pair(&self, b: Rational, boundary: BTreeMap<VertexId, Rational>) -> LogPair {
        LogPair::unchecked(self.graph.clone(), b, boundary)
            .expect("search graphs carry C")
            .with_fibration(self.fibration.clone())
    }

    pub fn feasibility_pair(&self) -> LogPair {
        self.pair(pair::six_sevenths(), BTreeMap::new())
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.graph.canonical_form()
    }

    /// Blows up `centre`; the new curve lies in `fibre`.
    pub fn blow(&self, centre: &[VertexId], fibre: FibreMark, mv: Move) -> Result<Self, GraphError> {
        let (graph, e) = self.graph.blow_up_subgraph(centre)?;
        let mut next = self.clone();
        next.graph = graph;
        next.fibration.insert(e, fibre);
        next.moves.push(mv);
        Ok(next)
    }

    fn blow_labels(&self, centre: &[&str], fibre: FibreMark) -> Self {
        let ids: Vec<VertexId> = centre.iter().map(|l| self.graph.find(l).expect(l)).collect();
        let mv = Move::WhiteVertex { white: centre.join("+") };
        let mut next = self.blow(&ids, fibre, mv).expect("explicit construction");
        next.moves.pop();
        next
    }

    fn fibre_of(&self, v: VertexId) -> FibreMark {
        self.fibration.get(&v).copied().unwrap_or(FibreMark::Section)
    }

    pub fn c_squared(&self) -> i64 {
        self.graph.weight(self.c)
    }
}

/// F2 with its minimal section and C as a double section. Fibres are added
/// when a move first touches them.
pub fn seed_f2() -> SearchState {
    let mut g = DualGraph::new();
    let c = g.add_vertex("C", 8, 1, false, VertexRole::BoundaryCurveC).unwrap();
    let sigma = g.add_vertex("Sigma", -2, 0, false, VertexRole::MinimalSection).unwrap();
    SearchState {
        graph: g,
        c,
        sigma,
        fibration: BTreeMap::from([(c, FibreMark::Multisection), (sigma, FibreMark::Section)]),
        fibres: 0,
        moves: Vec::new(),
    }
}

/// Adds a smooth fibre `F{i}` meeting Sigma once and C twice.
fn add_fibre(st: &SearchState) -> (SearchState, VertexId, u32) {
    let mut next = st.clone();
    let i = st.fibres;
    let f = next
        .graph
        .add_vertex(&format!("F{i}"), 0, 0, false, VertexRole::Fibre)
        .unwrap();
    next.graph.add_edge(next.sigma, f, 1).unwrap();
    next.graph.add_edge(next.c, f, 2).unwrap();
    next.fibration.insert(f, FibreMark::InFibre(i));
    next.fibres += 1;
    (next, f, i)
}

pub fn start_fibre(st: &SearchState, start: FibreStart) -> SearchState {
    let (s0, f, i) = add_fibre(st);
    let mark = FibreMark::InFibre(i);
    let c = s0.c;
    let mv = Move::NewFibre { fibre: i, start };
    let first: Vec<VertexId> = match start {
        FibreStart::Tangent | FibreStart::Transversal => vec![c, f],
        FibreStart::OffCurve => vec![f],
    };
    let s1 = s0.blow(&first, mark, mv.clone()).unwrap();
    let e1 = *s1.fibration.keys().max().unwrap();
    let second = match start {
        FibreStart::Tangent => vec![c, f, e1],
        FibreStart::Transversal | FibreStart::OffCurve => vec![f, e1],
    };
    let mut s2 = s1.blow(&second, mark, mv).unwrap();
    s2.moves.pop();
    s2
}

pub fn initial_fibre_moves(st: &SearchState) -> Vec<(Move, SearchState)> {
    if st.fibres >= MAX_FIBRES {
        return Vec::new();
    }
    [FibreStart::Tangent, FibreStart::Transversal, FibreStart::OffCurve]
        .into_iter()
        .map(|s| {
            let next = start_fibre(st, s);
            (next.moves.last().unwrap().clone(), next)
        })
        .collect()
}

pub fn extend_type1(st: &SearchState) -> Vec<(Move, SearchState)> {
    let g = &st.graph;
    g.whites()
        .into_iter()
        .filter(|&w| g.mult(w, st.c) == 1)
        .map(|w| {
            let mv = Move::Type1 { white: g.label(w).to_string() };
            (mv.clone(), st.blow(&[st.c, w], st.fibre_of(w), mv).unwrap())
        })
        .collect()
}

pub fn extend_type2(st: &SearchState) -> Vec<(Move, SearchState)> {
    let g = &st.graph;
    let mut out = Vec::new();
    for w in g.whites() {
        for (t, _) in g.neighbors(w) {
            if t == st.c || g.vertex(t).unwrap().class() != VertexClass::Black {
                continue;
            }
            let mv = Move::Type2 { white: g.label(w).to_string(), black: g.label(t).to_string() };
            out.push((mv.clone(), st.blow(&[w, t], st.fibre_of(w), mv).unwrap()));
        }
    }
    out
}

/// Generated only so that their rejection is recorded.
pub fn white_vertex_moves(st: &SearchState) -> Vec<(Move, SearchState)> {
    let g = &st.graph;
    g.whites()
        .into_iter()
        .map(|w| {
            let mv = Move::WhiteVertex { white: g.label(w).to_string() };
            (mv.clone(), st.blow(&[w], st.fibre_of(w), mv).unwrap())
        })
        .collect()
}

pub fn successors(st: &SearchState) -> Vec<(Move, SearchState)> {
    let mut out = initial_fibre_moves(st);
    out.extend(extend_type1(st));
    out.extend(extend_type2(st));
    out.extend(white_vertex_moves(st));
    out
}

/// First failed feasibility rule for `K + bC + B1`, or `None`.
pub fn prune_reason(p: &LogPair) -> Result<Option<String>, PairError> {
    let g = &p.graph;
    let c2 = p.c_squared();
    if c2 < 3 {
        return Ok(Some("C^2 < 3".into()));
    }
    if !intersection::exceptional_matrix(g).is_negative_definite() {
        return Ok(Some("exceptional locus not negative definite".into()));
    }
    let crep = p.crepant()?;
    if crep.check_log_canonical().is_err() {
        return Ok(Some("non log canonical point".into()));
    }
    if let Some(v) = g.validate_curve_constraints(&p.curve_context()).first() {
        return Ok(Some(format!("boundary curve constraint: {}", violation_kind(v))));
    }
    if !pair::check_ex3(p)? {
        return Ok(Some("(EX3) violated".into()));
    }
    if let Some(v) = pair::lemma22_bounds(p)?.first() {
        return Ok(Some(format!("bound on C: {v}")));
    }
    let sing = p.singularities_on_c();
    if p.boundary.is_empty() && sing.len() == 1 && !pair::type_inequality(c2, &sing[0].1) {
        return Ok(Some("(6-C^2)m > 7-k".into()));
    }
    if !pair::check_ex1(p)? {
        return Ok(Some("(EX1) violated".into()));
    }
    Ok(None)
}

fn violation_kind(v: &crate::graph::Violation) -> &'static str {
    use crate::graph::Violation::*;
    match v {
        NodeAtSingularPoint(_) | NodeOnComponent(_) => "node of C",
        TangentComponent(..) => "non-normal component",
        TwoComponentsAtPoint(_) => "two components through a point",
        ComponentNotAtFarEnd(_) => "component not at the far end",
        NotChainEnd(_) => "C not at a chain end",
        NonNormalMeeting(..) => "C meets a chain non-normally",
        SeveralPoints(_) => "C meets a tree twice",
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryOption {
    pub boundary: BTreeMap<VertexId, Rational>,
    pub max_b: Rational,
}

/// Admissible `B1` with standard coefficients on white curves. Options are
/// distinct up to automorphisms of the graph.
pub fn assign_boundaries(st: &SearchState) -> Result<Vec<BoundaryOption>, PairError> {
    let g = &st.graph;
    let whites = g.whites();
    let coefs = pair::standard_small();
    let mut chains: Vec<Vec<VertexId>> = Vec::new();
    for comp in g.components(&g.blacks()) {
        if let Some(&t) = comp.iter().find(|&&v| g.mult(v, st.c) > 0) {
            if let Some(ch) = g.chain_from(&comp, t) {
                chains.push(ch);
            }
        }
    }
    let half = rat(1, 2);
    let allowed = |w: VertexId, q: &Rational| -> bool {
        let m = g.mult(w, st.c);
        if m > 2 || (m == 2 && *q != half) {
            return false;
        }
        chains.iter().all(|ch| {
            let far = *ch.last().unwrap();
            let hits: Vec<VertexId> = ch.iter().copied().filter(|&x| g.mult(w, x) > 0).collect();
            hits.is_empty() || (hits == [far] && g.mult(w, far) == 1)
        })
    };

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut idx = vec![0usize; whites.len()];
    loop {
        let boundary: BTreeMap<VertexId, Rational> = whites
            .iter()
            .zip(&idx)
            .filter(|(_, &i)| i > 0)
            .map(|(&w, &i)| (w, coefs[i].clone()))
            .collect();
        let ok = boundary.iter().all(|(&w, q)| allowed(w, q))
            && chains.iter().all(|ch| {
                let far = *ch.last().unwrap();
                boundary.keys().filter(|&&w| g.mult(w, far) > 0).count() <= 1
            });
        if ok {
            let p = st.pair(pair::six_sevenths(), boundary.clone());
            if pair::check_ex2_elliptic(&p) && prune_reason(&p)?.is_none() {
                let tags = boundary.iter().map(|(&v, q)| (v, format(q))).collect();
                if seen.insert(g.canonical_form_tagged(&tags)) {
                    out.push(BoundaryOption { max_b: pair::max_b(&p)?, boundary });
                }
            }
        }
        let mut i = 0;
        loop {
            if i == idx.len() {
                out.sort_by(|a, b| {
                    let ka: Vec<&Rational> = a.boundary.values().collect();
                    let kb: Vec<&Rational> = b.boundary.values().collect();
                    (ka.len(), ka).cmp(&(kb.len(), kb))
                });
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < coefs.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Label of the Gorenstein surface `S_C`: contract white curves away from C
/// until none are left and name the remaining black configuration.
pub fn s_c_label(g: &DualGraph) -> Option<String> {
    let c = g.curve_c()?;
    match g.weight(c) {
        8 => return Some("Q2".into()),
        7 => return Some("S7".into()),
        _ => {}
    }
    let mut h = g.clone();
    while let Some(w) = h.whites().into_iter().find(|&w| h.mult(w, c) == 0) {
        h = h.contract_white(w).ok()?;
    }
    ade_label(&h, &h.blacks())
}

/// Names a forest of (-2)-curves by its Dynkin type, e.g. `2A1+A3`.
pub fn ade_label(g: &DualGraph, vs: &[VertexId]) -> Option<String> {
    let mut parts: Vec<(char, usize)> = Vec::new();
    for comp in g.components(vs) {
        if comp.iter().any(|&v| g.weight(v) != -2) {
            return None;
        }
        let n = comp.len();
        let deg = |v: VertexId| comp.iter().filter(|&&u| g.mult(u, v) > 0).count();
        let edges: usize = comp.iter().map(|&v| deg(v)).sum::<usize>() / 2;
        if edges + 1 != n || comp.iter().any(|&v| comp.iter().any(|&u| g.mult(u, v) > 1)) {
            return None;
        }
        let branch: Vec<VertexId> = comp.iter().copied().filter(|&v| deg(v) >= 3).collect();
        match branch.as_slice() {
            [] => parts.push(('A', n)),
            [b] if deg(*b) == 3 => {
                let rest: Vec<VertexId> = comp.iter().copied().filter(|v| v != b).collect();
                let mut arms: Vec<usize> = g.components(&rest).iter().map(Vec::len).collect();
                arms.sort();
                match arms.as_slice() {
                    [1, 1, _] => parts.push(('D', n)),
                    [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => parts.push(('E', n)),
                    _ => return None,
                }
            }
            _ => return None,
        }
    }
    parts.sort();
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < parts.len() {
        let j = (i..parts.len()).find(|&j| parts[j] != parts[i]).unwrap_or(parts.len());
        let name = format!("{}{}", parts[i].0, parts[i].1);
        out.push(if j - i > 1 { format!("{}{name}", j - i) } else { name });
        i = j;
    }
    Some(out.join("+"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CaseDecision {
    Keep,
    /// Same surface as a state already found with one section.
    Duplicate,
    Reject(String),
}

/// Filters for states whose ruling has black sections besides Sigma.
pub fn case2_case3_filters(
    st: &SearchState,
    known: &HashSet<CanonicalForm>,
) -> Result<CaseDecision, PairError> {
    let p = st.feasibility_pair();
    let (lhs, rhs) = pair::zhang_count(&p)?;
    if lhs >= 2 {
        return Ok(CaseDecision::Reject(format!(
            "two extra sections: at least {} blow-ups on C, so C^2 <= 2",
            case3_min_blowups_on_c()
        )));
    }
    if lhs <= 0 {
        return Ok(CaseDecision::Keep);
    }
    let g = &st.graph;
    let sections: Vec<VertexId> = g
        .blacks()
        .into_iter()
        .filter(|&v| v != st.sigma && st.fibre_of(v) == FibreMark::Section)
        .collect();
    if sections.iter().any(|&e| g.mult(e, st.c) > 0) {
        return Ok(CaseDecision::Reject(format!(
            "section meets C but its coefficient is at most {} < 3/7",
            format(&multisection_coefficient_bound())
        )));
    }
    if st.c_squared() < 3 {
        return Ok(CaseDecision::Reject("C^2 <= 2".into()));
    }
    if lhs != rhs || !pair::check_ex4(&p) {
        return Ok(CaseDecision::Reject("violates (EX4)".into()));
    }
    if let Some(r) = prune_reason(&p)? {
        return Ok(CaseDecision::Reject(r));
    }
    if known.contains(&st.canonical_form()) {
        return Ok(CaseDecision::Duplicate);
    }
    if assign_boundaries(st)?.is_empty() {
        return Ok(CaseDecision::Reject("no admissible boundary".into()));
    }
    Ok(CaseDecision::Keep)
}

/// From `(K + bC + dE).F <= 0` with `b >= 6/7`: `d <= 2 - 12/7`.
pub fn multisection_coefficient_bound() -> Rational {
    int(2) - int(2) * pair::six_sevenths()
}

/// Two sections each meeting C four times and each other twice.
pub fn case3_min_blowups_on_c() -> i64 {
    4 + 4 - 2
}

/// F2 with a second section `E` (`E^2 = 2`, `E.C = 4`, disjoint from
/// Sigma) and the fibres through the given points of `E` and C.
fn section_seed(points: usize) -> SearchState {
    let mut st = seed_f2();
    let e = st.graph.add_vertex("E", 2, 0, false, VertexRole::Other).unwrap();
    st.graph.add_edge(st.c, e, 4).unwrap();
    st.fibration.insert(e, FibreMark::Section);
    for _ in 0..points {
        let (mut next, f, _) = add_fibre(&st);
        next.graph.add_edge(e, f, 1).unwrap();
        st = next;
    }
    st
}

/// The contact patterns of E with C, blown up until E leaves C.
pub fn case2_states() -> Vec<(String, SearchState)> {
    let fib = FibreMark::InFibre;
    let mut out = Vec::new();

    // one point of contact order 4
    let mut st = section_seed(1);
    st = st.blow_labels(&["C", "E", "F0"], fib(0));
    for g in ["E4", "E5", "E6"] {
        st = st.blow_labels(&["C", "E", g], fib(0));
    }
    out.push(("(4)".to_string(), st));

    // orders 3 and 1; the second fibre is tangent to C
    let mut st = section_seed(2);
    st = st.blow_labels(&["C", "E", "F0"], fib(0));
    st = st.blow_labels(&["C", "E", "E5"], fib(0));
    st = st.blow_labels(&["C", "E", "E6"], fib(0));
    st = st.blow_labels(&["C", "E", "F1"], fib(1));
    st = st.blow_labels(&["C", "F1", "E8"], fib(1));
    out.push(("(3,1)".to_string(), st));

    // orders 2 and 2
    let mut st = section_seed(2);
    st = st.blow_labels(&["C", "E", "F0"], fib(0));
    st = st.blow_labels(&["C", "E", "E5"], fib(0));
    st = st.blow_labels(&["C", "E", "F1"], fib(1));
    st = st.blow_labels(&["C", "E", "E7"], fib(1));
    out.push(("(2,2)".to_string(), st));

    // orders 2, 1, 1
    let mut st = section_seed(3);
    st = st.blow_labels(&["C", "E", "F0"], fib(0));
    st = st.blow_labels(&["C", "E", "E6"], fib(0));
    st = st.blow_labels(&["C", "E", "F1"], fib(1));
    st = st.blow_labels(&["C", "F1", "E8"], fib(1));
    st = st.blow_labels(&["C", "E", "F2"], fib(2));
    st = st.blow_labels(&["C", "F2", "E10"], fib(2));
    out.push(("(2,1,1)".to_string(), st));
    out
}

/// `(K + 6/7 C + 1/2 F).C` for a general fibre `F` added to the state.
pub fn smooth_fibre_degree(st: &SearchState) -> Result<Rational, PairError> {
    let (next, f, _) = add_fibre(st);
    let p = next.pair(pair::six_sevenths(), BTreeMap::from([(f, rat(1, 2))]));
    p.degree()
}

#[derive(Debug, Clone)]
pub struct Surface {
    pub state: SearchState,
    pub s_c_label: String,
    pub options: Vec<BoundaryOption>,
}

#[derive(Debug, Clone, Default)]
pub struct SearchConfig {
    pub parallel: bool,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub surfaces: Vec<Surface>,
    /// Every state reached, seed included, in discovery order.
    pub states: Vec<SearchState>,
    /// `(move kind or case, reason) -> count`.
    pub rejections: BTreeMap<(String, String), usize>,
    pub case2: Vec<(String, CaseDecision)>,
}

impl SearchResult {
    pub fn reasons(&self) -> impl Iterator<Item = &str> {
        self.rejections.keys().map(|(_, r)| r.as_str())
    }
}

const FAMILY_ORDER: [&str; 8] = ["Q2", "S7", "A1+A2", "A4", "D5", "2A1+A3", "E6", "A1+A5"];

pub fn family_rank(label: &str) -> usize {
    FAMILY_ORDER.iter().position(|&l| l == label).unwrap_or(FAMILY_ORDER.len())
}

/// The cone over a conic: F2 itself with C a double section and a fibre
/// `C2` as the second component.
pub fn cone_state() -> SearchState {
    let mut st = seed_f2();
    let f = st.graph.add_vertex("C2", 0, 0, false, VertexRole::BoundaryComponent(2)).unwrap();
    st.graph.add_edge(st.sigma, f, 1).unwrap();
    st.graph.add_edge(st.c, f, 2).unwrap();
    st.fibration.insert(f, FibreMark::InFibre(0));
    st.fibres = 1;
    st
}

fn cone_surface() -> Surface {
    let st = cone_state();
    let f = st.graph.find("C2").unwrap();
    let p = st.pair(pair::six_sevenths(), BTreeMap::from([(f, rat(1, 2))]));
    let max_b = pair::max_b(&p).expect("cone degree is affine");
    Surface {
        s_c_label: "Q2".into(),
        options: vec![BoundaryOption { boundary: p.boundary.clone(), max_b }],
        state: st,
    }
}

type Child = (Move, Result<SearchState, String>);

fn expand(st: &SearchState) -> Vec<Child> {
    successors(st)
        .into_iter()
        .map(|(mv, next)| {
            let verdict = match prune_reason(&next.feasibility_pair()) {
                Ok(None) => Ok(next),
                Ok(Some(r)) => Err(r),
                Err(e) => Err(e.to_string()),
            };
            (mv, verdict)
        })
        .collect()
}

/// Runs the whole search, prepends the cone, and evaluates the explicit
/// two-section configurations.
pub fn classify_all(cfg: &SearchConfig) -> Result<SearchResult, PairError> {
    let seed = seed_f2();
    let mut seen: HashMap<CanonicalForm, usize> = HashMap::new();
    seen.insert(seed.canonical_form(), 0);
    let mut states = vec![seed];
    let mut rejections: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut frontier = vec![0usize];

    while !frontier.is_empty() {
        let children: Vec<Vec<Child>> = if cfg.parallel {
            frontier.par_iter().map(|&i| expand(&states[i])).collect()
        } else {
            frontier.iter().map(|&i| expand(&states[i])).collect()
        };
        let mut next = Vec::new();
        for (mv, verdict) in children.into_iter().flatten() {
            match verdict {
                Err(r) => *rejections.entry((mv.kind(), r)).or_insert(0) += 1,
                Ok(st) => {
                    let key = st.canonical_form();
                    if !seen.contains_key(&key) {
                        seen.insert(key, states.len());
                        next.push(states.len());
                        states.push(st);
                    }
                }
            }
        }
        frontier = next;
    }

    let evaluated: Vec<Result<Option<Surface>, PairError>> = {
        let eval = |st: &SearchState| -> Result<Option<Surface>, PairError> {
            if st.moves.is_empty() {
                return Ok(None);
            }
            let options = assign_boundaries(st)?;
            if options.is_empty() {
                return Ok(None);
            }
            let label = s_c_label(&st.graph).unwrap_or_else(|| "?".into());
            Ok(Some(Surface { state: st.clone(), s_c_label: label, options }))
        };
        if cfg.parallel {
            states.par_iter().map(eval).collect()
        } else {
            states.iter().map(eval).collect()
        }
    };
    let mut surfaces = vec![cone_surface()];
    for s in evaluated {
        if let Some(s) = s? {
            surfaces.push(s);
        }
    }
    surfaces.sort_by_key(|s| (family_rank(&s.s_c_label), s.state.graph.blowup_count()));

    if let Some(first) = states.iter().find(|s| {
        matches!(s.moves.as_slice(), [Move::NewFibre { start: FibreStart::Tangent, .. }])
    }) {
        if smooth_fibre_degree(first)? > int(0) {
            *rejections
                .entry(("boundary".into(), "smooth fibre component: (EX1) violated".into()))
                .or_insert(0) += 1;
        }
    }

    let known: HashSet<CanonicalForm> = states.iter().map(SearchState::canonical_form).collect();
    let mut case2 = Vec::new();
    for (name, st) in case2_states() {
        let d = case2_case3_filters(&st, &known)?;
        if let CaseDecision::Reject(r) = &d {
            *rejections.entry((format!("extra section {name}"), r.clone())).or_insert(0) += 1;
        }
        case2.push((name, d));
    }
    let case3 = format!(
        "two extra sections: at least {} blow-ups on C, so C^2 <= {}",
        case3_min_blowups_on_c(),
        8 - case3_min_blowups_on_c()
    );
    *rejections.entry(("two extra sections".into(), case3)).or_insert(0) += 1;

    Ok(SearchResult { surfaces, states, rejections, case2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_shape() {
        let st = seed_f2();
        assert_eq!(st.c_squared(), 8);
        let p = st.feasibility_pair();
        assert_eq!(pair::zhang_count(&p).unwrap(), (0, 0));
        assert!(pair::check_ex1(&p).unwrap());
    }

    #[test]
    fn fibre_starts() {
        let seed = seed_f2();
        let one = start_fibre(&seed, FibreStart::Tangent);
        assert_eq!(one.c_squared(), 6);
        assert_eq!(prune_reason(&one.feasibility_pair()).unwrap(), None);
        let two = start_fibre(&seed, FibreStart::Transversal);
        assert_eq!(two.c_squared(), 7);
        assert_eq!(pair::max_b(&two.feasibility_pair()).unwrap(), rat(6, 7));
        let three = start_fibre(&seed, FibreStart::OffCurve);
        assert_eq!(
            prune_reason(&three.feasibility_pair()).unwrap().as_deref(),
            Some("non log canonical point")
        );
        assert_ne!(one.canonical_form(), two.canonical_form());
    }

    #[test]
    fn ade_names() {
        let one = start_fibre(&seed_f2(), FibreStart::Tangent);
        assert_eq!(s_c_label(&one.graph).as_deref(), Some("A1+A2"));
        let t1 = extend_type1(&one);
        assert_eq!(t1.len(), 1);
        assert_eq!(s_c_label(&t1[0].1.graph).as_deref(), Some("A4"));
    }

    #[test]
    fn bound_values() {
        assert_eq!(multisection_coefficient_bound(), rat(2, 7));
        assert_eq!(8 - case3_min_blowups_on_c(), 2);
    }

    mod search {
        use std::collections::BTreeSet;

        use num_traits::Signed;

        use crate::enumerate::{self, *};
        use crate::intersection;
        use crate::pair;
        use crate::rational::{int, rat};
        use crate::table::{self, ClassificationTable};

        /// States reached by the converged search, seed included. Frozen.
        const STATE_BOUND: usize = 21;

        #[test]
        fn search_terminates_within_bound() {
            let r = classify_all(&SearchConfig::default()).unwrap();
            assert!(r.states.len() <= STATE_BOUND, "{} states", r.states.len());
            assert_eq!(r.states.len(), STATE_BOUND);
        }

        #[test]
        fn parallel_and_serial_agree() {
            let a = classify_all(&SearchConfig { parallel: false }).unwrap();
            let b = classify_all(&SearchConfig { parallel: true }).unwrap();
            let gold = ClassificationTable::golden();
            let ta = table::build_table(&a, &gold, 8).unwrap().to_json();
            let tb = table::build_table(&b, &gold, 8).unwrap().to_json();
            assert_eq!(ta, tb);
            assert_eq!(a.rejections, b.rejections);
        }

        #[test]
        fn emitted_pairs_are_sound() {
            let r = classify_all(&SearchConfig::default()).unwrap();
            for s in &r.surfaces {
                let g = &s.state.graph;
                for o in &s.options {
                    let p = s.state.pair(pair::six_sevenths(), o.boundary.clone());
                    let ex = pair::ex_report(&p).unwrap();
                    assert!(ex.all(), "{:?}: {ex:?}", s.state.moves);
                    let (l, rr) = pair::zhang_count(&p).unwrap();
                    assert_eq!(l, rr);
                    assert!(o.max_b >= rat(6, 7) && o.max_b <= int(1));
                }
                for v in g.ids().into_iter().filter(|&v| !g.blacks().contains(&v)) {
                    let sq = intersection::pushforward_self_intersection(g, v).unwrap();
                    assert!(sq.is_positive(), "{} on {:?}", g.label(v), s.state.moves);
                }
            }
        }

        #[test]
        fn gorenstein_intermediates() {
            let r = classify_all(&SearchConfig::default()).unwrap();
            let labels: BTreeSet<String> = r
                .states
                .iter()
                .filter(|s| !s.moves.is_empty() && s.feasibility_pair().singularities_on_c().is_empty())
                .filter_map(|s| enumerate::s_c_label(&s.graph))
                .collect();
            let want: BTreeSet<String> =
                ["A1+A2", "A4", "D5", "E6", "2A1+A3", "A1+A5"].iter().map(|s| s.to_string()).collect();
            assert_eq!(labels, want);
        }

        #[test]
        fn transversal_start_is_row_two() {
            let st = enumerate::start_fibre(&enumerate::seed_f2(), enumerate::FibreStart::Transversal);
            let p = st.feasibility_pair();
            assert_eq!(p.degree().unwrap(), rat(0, 1));
            assert!(enumerate::successors(&st)
                .iter()
                .all(|(_, s)| enumerate::prune_reason(&s.feasibility_pair()).unwrap().is_some()));
        }

        #[test]
        fn type_two_chain_reaches_row_eight() {
            let r = classify_all(&SearchConfig::default()).unwrap();
            let s = r.surfaces.iter().find(|s| s.options[0].max_b == rat(19, 22) && s.s_c_label == "A1+A2");
            let s = s.expect("row 8 surface");
            assert!(s.state.moves.iter().filter(|m| matches!(m, Move::Type2 { .. })).count() == 3);
        }

        #[test]
        fn one_type_one_past_e6_is_pruned() {
            let r = classify_all(&SearchConfig::default()).unwrap();
            let e6 = r
                .states
                .iter()
                .find(|s| s.c_squared() == 3 && enumerate::s_c_label(&s.graph).as_deref() == Some("E6"))
                .unwrap();
            for (_, next) in enumerate::extend_type1(e6) {
                let why = enumerate::prune_reason(&next.feasibility_pair()).unwrap();
                assert_eq!(why.as_deref(), Some("C^2 < 3"));
            }
        }

        #[test]
        fn row_three_and_nine_options() {
            let r = classify_all(&SearchConfig::default()).unwrap();
            let gold = ClassificationTable::golden();
            let t = table::build_table(&r, &gold, 12).unwrap();
            let n = |id| t.row(id).unwrap().boundary_options.len();
            assert_eq!((n(3), n(9), n(10)), (5, 2, 2));
            let ten = t.row(10).unwrap();
            assert_eq!(ten.boundary_options[0].max_b, rat(10, 11));
            assert!(ten.boundary_options[0].complements.iter().any(|c| c.n == 11));
            assert!(t.rows.iter().all(|r| r.boundary_options.iter().all(|o| o.complements.iter().any(|c| c.n == 7))));
        }

        #[test]
        fn no_regular_complements() {
            let r = classify_all(&SearchConfig::default()).unwrap();
            let t = table::build_table(&r, &ClassificationTable::golden(), 6).unwrap();
            for row in &t.rows {
                for o in &row.boundary_options {
                    let ns: Vec<u32> = o.complements.iter().map(|c| c.n).collect();
                    assert!(ns.iter().all(|n| ![1, 2, 3, 4, 6].contains(n)), "row {}: {ns:?}", row.id);
                }
            }
        }

        #[test]
        fn table_json_round_trip() {
            let r = classify_all(&SearchConfig::default()).unwrap();
            let t = table::build_table(&r, &ClassificationTable::golden(), 12).unwrap();
            let back = ClassificationTable::from_json(&t.to_json()).unwrap();
            assert_eq!(back, t);
            assert!(!t.to_json().contains('.'), "fractions must not be decimals");
        }

        #[test]
        fn verify_row_examples() {
            let gold = ClassificationTable::golden();
            for id in [4, 5, 10] {
                let rep = table::verify_row(gold.row(id).unwrap()).unwrap();
                assert!(rep.passed(), "row {id}: {:?}", rep.failures().collect::<Vec<_>>());
            }
        }
    }
}

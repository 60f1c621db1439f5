//! Randomised checks of the graph calculus and the chain expansions.

use proptest::prelude::*;

use crate::enumerate::{seed_f2, start_fibre, FibreStart};
use crate::graph::{DualGraph, GraphRecord, VertexId};
use crate::singularity::{hj_contract, hj_expand, CyclicQuotientType};

/// F2 with a tangent fibre, then blow-ups chosen by `picks`.
fn grown(picks: &[(usize, usize)]) -> DualGraph {
    let mut g = start_fibre(&seed_f2(), FibreStart::Tangent).graph;
    for &(a, b) in picks {
        let ids = g.ids();
        let x = ids[a % ids.len()];
        let nb = g.neighbors(x);
        let centre: Vec<VertexId> = if nb.is_empty() || b % 3 == 0 {
            vec![x]
        } else {
            vec![x, nb[b % nb.len()].0]
        };
        g = g.blow_up_subgraph(&centre).unwrap().0;
    }
    g
}

fn permuted(r: &GraphRecord, perm: &[usize]) -> GraphRecord {
    let mut out = r.clone();
    let n = r.vertices.len();
    out.vertices = (0..n).map(|i| r.vertices[perm[i] % n].clone()).collect();
    let mut seen = std::collections::BTreeSet::new();
    out.vertices.retain(|v| seen.insert(v.label.clone()));
    for v in &r.vertices {
        if seen.insert(v.label.clone()) {
            out.vertices.push(v.clone());
        }
    }
    out.edges.reverse();
    out
}

proptest! {
    #[test]
    fn canonical_form_ignores_vertex_order(
        picks in prop::collection::vec((0usize..20, 0usize..20), 0..5),
        perm in prop::collection::vec(0usize..40, 40),
    ) {
        let g = grown(&picks);
        let h = DualGraph::from_record(&permuted(&g.to_record(), &perm)).unwrap();
        prop_assert_eq!(g.canonical_form(), h.canonical_form());
        let iso = g.isomorphism_to(&h).unwrap();
        for (a, b, m) in g.edges() {
            prop_assert_eq!(h.mult(iso[&a], iso[&b]), m);
        }
        for v in g.ids() {
            prop_assert_eq!(g.weight(v), h.weight(iso[&v]));
        }
    }

    #[test]
    fn blow_up_then_contract(picks in prop::collection::vec((0usize..20, 0usize..20), 1..6)) {
        let g = grown(&picks[..picks.len() - 1]);
        let h = grown(&picks);
        let e = *h.ids().last().unwrap();
        prop_assert_eq!(h.contract_white(e).unwrap().to_record(), g.to_record());
    }

    #[test]
    fn hj_round_trip_and_reversal(m in 2u64..500, k in 1u64..500) {
        let k = 1 + k % (m - 1);
        prop_assume!(num_integer::Integer::gcd(&m, &k) == 1);
        let c = hj_expand(m, k).unwrap();
        prop_assert_eq!(hj_contract(&c), (m, k));
        let r = CyclicQuotientType::new(m, k).unwrap().reversed();
        let mut w = c.weights.clone();
        w.reverse();
        prop_assert_eq!(hj_expand(r.m, r.k).unwrap().weights, w);
    }
}

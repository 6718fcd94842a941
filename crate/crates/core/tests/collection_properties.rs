use proptest::prelude::*;

use transversal_core::constructions::{make_h, make_half_split, perturb_with_log, random_collection, random_min_degree_collection, BInternal, Bipartition};
use transversal_core::{BitSet, GraphCollection, SubgraphKind, TransversalEdge, TransversalSubgraph};

fn collection() -> impl Strategy<Value = GraphCollection> {
    (2usize..=12, 1usize..=5, 0.0f64..=1.0, any::<u64>())
        .prop_map(|(n, s, p, seed)| random_collection(n, s, p, seed).unwrap())
}

fn subset(n: usize, bits: u64) -> BitSet {
    BitSet::from_members(n, (0..n).filter(|&v| bits >> v & 1 == 1))
}

/// Counts by scanning vertex pairs: an edge with both ends in `X ∩ Y` once,
/// otherwise once if one end is in `X` and the other in `Y`.
fn naive_count(g: &GraphCollection, c: usize, x: &BitSet, y: &BitSet) -> usize {
    let n = g.n();
    let mut count = 0;
    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(c, u, v)
                && ((x.contains(u) && y.contains(v)) || (x.contains(v) && y.contains(u)))
            {
                count += 1;
            }
        }
    }
    count
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn edge_count_is_symmetric_and_counts_overlap_once(g in collection(), xs in any::<u64>(), ys in any::<u64>()) {
        let n = g.n();
        let (x, y) = (subset(n, xs), subset(n, ys));
        for c in 0..g.colors() {
            let xy = g.edge_count(c, &x, &y).unwrap();
            prop_assert_eq!(xy, g.edge_count(c, &y, &x).unwrap());
            prop_assert_eq!(xy, naive_count(&g, c, &x, &y));
            let inside = g.graph(c).edges().filter(|&(u, v)| x.contains(u) && x.contains(v)).count();
            prop_assert_eq!(g.edge_count(c, &x, &x).unwrap(), inside);
        }
    }

    #[test]
    fn color_lists_are_symmetric_and_exact(g in collection()) {
        let n = g.n();
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    prop_assert!(g.color_list(u, v).is_err());
                    continue;
                }
                let l = g.color_list(u, v).unwrap();
                prop_assert_eq!(&l, &g.color_list(v, u).unwrap());
                for c in 0..g.colors() {
                    prop_assert_eq!(l.contains(c), g.graph(c).has_edge(u, v));
                }
            }
        }
    }

    #[test]
    fn validate_is_sound(g in collection(), raw in prop::collection::vec((0usize..14, 0usize..14, 0usize..6), 0..8), kind in 0usize..4) {
        let kind = [SubgraphKind::Cycle, SubgraphKind::Path, SubgraphKind::Matching, SubgraphKind::Generic][kind];
        let t = TransversalSubgraph::new(kind, raw.iter().map(|&(u, v, c)| TransversalEdge::new(u, v, c)).collect());
        if t.validate(&g).is_ok() {
            let mut seen = std::collections::BTreeSet::new();
            for e in &t.edges {
                prop_assert!(e.u != e.v);
                prop_assert!(g.color_list(e.u, e.v).unwrap().contains(e.color));
                prop_assert!(seen.insert(e.color));
            }
        }
    }

    #[test]
    fn perturb_toggles_exactly(g in collection(), k in 0usize..20, seed in any::<u64>()) {
        let (h, log) = perturb_with_log(&g, k, seed);
        let budget = g.colors() * g.n() * (g.n() - 1) / 2;
        prop_assert_eq!(log.len(), k.min(budget));
        prop_assert_eq!(g.toggle_distance(&h), Some(k.min(budget)));
        prop_assert_eq!(h, perturb_with_log(&g, k, seed).0);
    }

    #[test]
    fn min_degree_generator_is_deterministic(n in 4usize..14, s in 1usize..5, seed in any::<u64>()) {
        let d = n.div_ceil(2);
        let g = random_min_degree_collection(n, s, d, seed).unwrap();
        prop_assert!(g.min_degree() >= d);
        prop_assert_eq!(g, random_min_degree_collection(n, s, d, seed).unwrap());
    }
}

#[test]
fn h_family_counts_and_degree_formula() {
    for n in 2..=14 {
        let p = Bipartition::canonical(n);
        let (a_len, b_len) = (p.a.len(), p.b.len());
        assert_eq!(a_len, n.div_ceil(2));
        for a in 0..=n {
            let g = make_h(n, a, n - a).unwrap();
            assert_eq!(g.colors(), n);
            for c in 0..n {
                let across = g.edge_count(c, &p.a, &p.b).unwrap();
                let inside = g.edge_count(c, &p.a, &p.a).unwrap() + g.edge_count(c, &p.b, &p.b).unwrap();
                if c < a {
                    assert_eq!((across, inside), (0, a_len * (a_len - 1) / 2 + b_len * (b_len - 1) / 2));
                } else {
                    assert_eq!((across, inside), (a_len * b_len, 0));
                }
            }
            assert_eq!(g.min_degree(), n / 2 - usize::from(a > 0), "n = {n}, a = {a}");
        }
    }
}

#[test]
fn half_split_counts() {
    for n in 3..=14 {
        for b_internal in [BInternal::Empty, BInternal::Complete] {
            let g = make_half_split(n, n, b_internal).unwrap();
            let a = BitSet::from_members(n, 0..n / 2 + 1);
            let b = a.complement();
            for c in 0..n {
                assert_eq!(g.edge_count(c, &a, &a).unwrap(), 0);
                assert_eq!(g.edge_count(c, &a, &b).unwrap(), a.len() * b.len());
            }
        }
    }
}

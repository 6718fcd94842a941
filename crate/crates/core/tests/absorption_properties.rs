use std::collections::BTreeSet;

use proptest::prelude::*;

use transversal_core::absorption::{
    absorb_path, absorb_vertex, enumerate_absorbing_paths, max_disjoint_segments, random_transversal_matching,
    AbsorbingPathRecord, DirectedKGraphCollection, EnumerationOptions, Forbidden,
};
use transversal_core::constructions::random_collection;
use transversal_core::solver::{find_transversal_hamilton_cycle, SearchBudget};
use transversal_core::{GraphCollection, Rational, TransversalSubgraph};

/// Windows are arcs of 4 consecutive positions; branch on each marked start.
fn brute_segments(qualifying: &[bool]) -> usize {
    fn go(q: &[bool], start: usize, used: &mut Vec<bool>) -> usize {
        let t = q.len();
        let mut best = 0;
        for s in start..t {
            if !q[s] || (0..4).any(|d| used[(s + d) % t]) {
                continue;
            }
            (0..4).for_each(|d| used[(s + d) % t] = true);
            best = best.max(1 + go(q, s + 1, used));
            (0..4).for_each(|d| used[(s + d) % t] = false);
        }
        best
    }
    if qualifying.len() < 4 {
        return 0;
    }
    go(qualifying, 0, &mut vec![false; qualifying.len()])
}

/// A rainbow Hamilton cycle on the first `k` vertices using colours `0..k`,
/// found inside `g`.
fn inner_cycle(g: &GraphCollection, k: usize) -> Option<TransversalSubgraph> {
    let graphs = g.graphs()[..k]
        .iter()
        .map(|graph| {
            let edges: Vec<(usize, usize)> = graph.edges().filter(|&(u, v)| u < k && v < k).collect();
            transversal_core::Graph::from_edges(k, 0, edges).unwrap()
        })
        .collect();
    let sub = GraphCollection::new(k, graphs).unwrap();
    find_transversal_hamilton_cycle(&sub, &SearchBudget::unlimited()).unwrap().witness
}

/// Every window of the cycle that is `c`-absorbing for `(v, u)`.
fn windows(g: &GraphCollection, cycle: &TransversalSubgraph, c: usize, v: usize, u: usize) -> Vec<AbsorbingPathRecord> {
    let (order, colors) = cycle.cycle_walk().unwrap();
    let t = order.len();
    let mut out = Vec::new();
    for s in 0..t {
        for forward in [true, false] {
            let at = |i: usize| if forward { (s + i) % t } else { (s + t - i) % t };
            let edge = |i: usize| if forward { colors[at(i)] } else { colors[at(i + 1)] };
            let record = AbsorbingPathRecord {
                vertices: [order[at(0)], order[at(1)], order[at(2)], order[at(3)]],
                colors: [edge(0), edge(1), edge(2)],
                absorbed_color: c,
                anchor: (v, u),
            };
            if record.validate(g).is_ok() {
                out.push(record);
            }
        }
    }
    out
}

fn check_growth(old: &TransversalSubgraph, new: &TransversalSubgraph, g: &GraphCollection, added_v: &[usize], added_c: &[usize]) {
    new.validate(g).unwrap();
    let mut vertices = old.vertices();
    vertices.extend(added_v);
    assert_eq!(new.vertices(), vertices);
    let mut colors = old.colors();
    colors.extend(added_c);
    assert_eq!(new.colors(), colors);
    assert_eq!(new.len(), new.colors().len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn greedy_segments_match_brute_force(q in prop::collection::vec(any::<bool>(), 0..=40)) {
        prop_assert_eq!(max_disjoint_segments(&q), brute_segments(&q));
    }

    #[test]
    fn enumerated_records_revalidate(n in 6usize..=9, p in 0.4f64..=1.0, seed in any::<u64>(), c in 0usize..6, v in 0usize..6, u in 0usize..6) {
        let g = random_collection(n, n, p, seed).unwrap();
        let forbidden = Forbidden { vertices: vec![], colors: vec![(c + 1) % n] };
        let records = enumerate_absorbing_paths(&g, c, v, u, &forbidden, EnumerationOptions { limit: Some(500), ..Default::default() }).unwrap();
        for r in &records {
            r.validate(&g).unwrap();
            prop_assert!(!r.colors.contains(&((c + 1) % n)));
        }
        let unique: BTreeSet<_> = records.iter().collect();
        prop_assert_eq!(unique.len(), records.len());
    }

    #[test]
    fn absorbing_a_vertex_preserves_rainbow(p in 0.6f64..=1.0, seed in any::<u64>()) {
        let k = 7;
        let g = random_collection(k + 1, k + 1, p, seed).unwrap();
        let Some(cycle) = inner_cycle(&g, k) else { return Ok(()) };
        for record in windows(&g, &cycle, k, k, k) {
            let grown = absorb_vertex(&g, &cycle, &record).unwrap();
            check_growth(&cycle, &grown, &g, &[k], &[k]);
            prop_assert_eq!(grown.vertices().len(), k + 1);
        }
    }

    #[test]
    fn absorbing_a_path_preserves_rainbow(p in 0.6f64..=1.0, seed in any::<u64>()) {
        let k = 7;
        let g = random_collection(k + 2, k + 2, p, seed).unwrap();
        let Some(cycle) = inner_cycle(&g, k) else { return Ok(()) };
        let (v, u, c, d) = (k, k + 1, k, k + 1);
        if !g.has_edge(d, v, u) {
            return Ok(());
        }
        let path = TransversalSubgraph::path_from_order(&[v, u], &[d]);
        for record in windows(&g, &cycle, c, v, u) {
            let grown = absorb_path(&g, &cycle, &record, &path).unwrap();
            check_growth(&cycle, &grown, &g, &[v, u], &[c, d]);
        }
    }

    #[test]
    fn matcher_output_is_a_transversal_matching(n in 8usize..=30, t in 1usize..=8, density in 1usize..=4, seed in any::<u64>()) {
        let h = DirectedKGraphCollection::from_predicate(n, 2, t, |i, e| (e[0] * 7 + e[1] * 3 + i) % density == 0).unwrap();
        let z = DirectedKGraphCollection::from_predicate(n, 2, 3, |j, e| (e[0] + e[1] + j) % 2 == 0).unwrap();
        let report = random_transversal_matching(&h, &z, Rational::new(1, 4), seed).unwrap();
        let mut seen_graphs = BTreeSet::new();
        let mut seen_vertices = BTreeSet::new();
        for m in &report.matching {
            prop_assert!(seen_graphs.insert(m.index));
            prop_assert!(h.contains(m.index, &m.tuple));
            for &v in &m.tuple {
                prop_assert!(seen_vertices.insert(v));
            }
        }
        for (j, &cov) in report.coverage.iter().enumerate() {
            prop_assert_eq!(cov, report.matching.iter().filter(|m| z.contains(j, &m.tuple)).count());
        }
    }
}

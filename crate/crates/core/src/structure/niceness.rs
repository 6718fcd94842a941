//! `eps`-niceness of a single graph: every pair of vertex sets of size at
//! least `(1/2 - eps) n` spans at least `eps n^2` edges.
//!
//! `e(A, B)` only grows when vertices are added, so pairs of size exactly
//! `s = ceil((1/2 - eps) n)` decide the question.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::StructureError;
use crate::bitset::{low_mask, BitIter, BitSet, VertexSet};
use crate::closeness::distance::k_subsets;
use crate::collection::Graph;
use crate::constructions::seeded;
use crate::scalar::{check_open_range, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum NicenessMode {
    /// Every pair of `s`-sets; `n <= 16`.
    Exhaustive,
    /// Swap descent on the pair from structural and random starts.
    Heuristic { restarts: usize, seed: u64 },
}

impl NicenessMode {
    pub const EXHAUSTIVE_MAX_N: usize = 16;
    pub const HEURISTIC_MAX_N: usize = 64;

    /// Exhaustive when `n <= 16`, otherwise 200 heuristic restarts.
    pub fn auto(n: usize) -> Self {
        if n <= Self::EXHAUSTIVE_MAX_N {
            NicenessMode::Exhaustive
        } else {
            NicenessMode::Heuristic { restarts: 200, seed: 0 }
        }
    }
}

/// A pair of large sets spanning few edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NicenessWitness {
    pub a: VertexSet,
    pub b: VertexSet,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NicenessVerdict<T> {
    pub nice: bool,
    pub epsilon: T,
    /// `s = ceil((1/2 - eps) n)`.
    pub set_size: usize,
    /// Present exactly when `nice` is false.
    pub witness: Option<NicenessWitness>,
    /// False when `nice = true` rests on local search only.
    pub exact: bool,
}

pub(crate) fn binding_size<T: Scalar>(n: usize, eps: T) -> usize {
    let s = ((T::half() - eps) * T::from_usize(n)).ceil_int();
    s.clamp(0, n as i64) as usize
}

/// Tests whether `graph` is `eps`-nice. Needs `0 < eps < 1/2`.
pub fn is_nice<T: Scalar>(graph: &Graph, eps: T, mode: NicenessMode) -> Result<NicenessVerdict<T>, StructureError> {
    check_open_range("eps", eps, T::half()).map_err(StructureError::Parameter)?;
    niceness_verdict(graph, eps, mode)
}

/// [`is_nice`] without the range check; for `eps >= 1/2` the binding size is
/// zero and no graph is nice.
pub(crate) fn niceness_verdict<T: Scalar>(
    graph: &Graph,
    eps: T,
    mode: NicenessMode,
) -> Result<NicenessVerdict<T>, StructureError> {
    let n = graph.n();
    let s = binding_size(n, eps);
    let floor = eps * T::from_usize(n) * T::from_usize(n);
    let (best, exact) = match mode {
        NicenessMode::Exhaustive => {
            if n > NicenessMode::EXHAUSTIVE_MAX_N {
                return Err(StructureError::TooLarge { n, max: NicenessMode::EXHAUSTIVE_MAX_N });
            }
            (exhaustive_min_pair(graph, s), true)
        }
        NicenessMode::Heuristic { restarts, seed } => {
            if n > NicenessMode::HEURISTIC_MAX_N {
                return Err(StructureError::TooLarge { n, max: NicenessMode::HEURISTIC_MAX_N });
            }
            (heuristic_min_pair(graph, s, restarts, seed), false)
        }
    };
    let nice = T::from_usize(best.count) >= floor;
    Ok(NicenessVerdict {
        nice,
        epsilon: eps,
        set_size: s,
        witness: (!nice).then_some(best),
        // a violating pair is a proof either way
        exact: exact || !nice,
    })
}

/// `G` is `eps`-extremal when it is not `eps^3`-nice. Needs `0 < eps < 1`.
pub fn is_extremal<T: Scalar>(graph: &Graph, eps: T, mode: NicenessMode) -> Result<bool, StructureError> {
    Ok(!extremality(graph, eps, mode)?.nice)
}

/// The `eps^3`-niceness verdict behind [`is_extremal`].
pub fn extremality<T: Scalar>(graph: &Graph, eps: T, mode: NicenessMode) -> Result<NicenessVerdict<T>, StructureError> {
    check_open_range("eps", eps, T::one()).map_err(StructureError::Parameter)?;
    niceness_verdict(graph, eps.cube(), mode)
}

fn rows(graph: &Graph) -> Vec<u64> {
    (0..graph.n()).map(|v| graph.row_mask(v)).collect()
}

/// `e(A, B)` with edges inside `A ∩ B` counted once.
fn pair_count(rows: &[u64], a: u64, b: u64) -> usize {
    let across: u32 = BitIter(a).map(|v| (rows[v] & b).count_ones()).sum();
    let both = a & b;
    let inside: u32 = BitIter(both).map(|v| (rows[v] & both).count_ones()).sum();
    (across - inside / 2) as usize
}

/// The minimum of `e(A, B)` over pairs of `s`-sets, smallest masks on ties.
///
/// For fixed `A`, write `B = B1 ∪ B2` with `B1 ⊆ A` and `B2` outside. Then
/// `e(A, B) = e(A) - e(A \ B1) + sum of d(b, A) over b in B2`, so for each
/// split size the best `B1` leaves the densest part of `A` behind and the
/// best `B2` takes the smallest degrees into `A`.
fn exhaustive_min_pair(graph: &Graph, s: usize) -> NicenessWitness {
    let n = graph.n();
    let rows = rows(graph);
    let masks: Vec<u64> = k_subsets(n, s).collect();
    let (count, a, b) = masks
        .par_iter()
        .map(|&a| best_partner(&rows, n, s, a))
        .min()
        .expect("at least one s-set");
    NicenessWitness {
        a: BitSet::from_mask(n, a),
        b: BitSet::from_mask(n, b),
        count,
    }
}

fn best_partner(rows: &[u64], n: usize, s: usize, a: u64) -> (usize, u64, u64) {
    let members: Vec<usize> = BitIter(a).collect();
    let mut edges_in = vec![0usize; 1 << s];
    let mut densest: Vec<Option<(usize, u64)>> = vec![None; s + 1];
    for r in 0usize..1 << s {
        let mut mask = 0u64;
        for (i, &v) in members.iter().enumerate() {
            if r >> i & 1 == 1 {
                mask |= 1 << v;
            }
        }
        if r > 0 {
            let low = r.trailing_zeros() as usize;
            let rest_mask = mask & !(1 << members[low]);
            edges_in[r] = edges_in[r & (r - 1)] + (rows[members[low]] & rest_mask).count_ones() as usize;
        }
        let size = r.count_ones() as usize;
        let e = edges_in[r];
        if densest[size].map_or(true, |(best, _)| e > best) {
            densest[size] = Some((e, mask));
        }
    }
    let e_a = edges_in[(1 << s) - 1];
    let mut outside: Vec<(usize, usize)> = (0..n)
        .filter(|&v| a >> v & 1 == 0)
        .map(|v| ((rows[v] & a).count_ones() as usize, v))
        .collect();
    outside.sort_unstable();
    let mut best: Option<(usize, u64, u64)> = None;
    for kept in 0..=s.min(outside.len()) {
        // kept = |B2|, so A \ B1 has `kept` vertices
        let (dense, left_behind) = densest[kept].expect("every size occurs");
        let b1 = a & !left_behind;
        let b2: u64 = outside[..kept].iter().fold(0, |m, &(_, v)| m | 1 << v);
        let cost = e_a - dense + outside[..kept].iter().map(|&(d, _)| d).sum::<usize>();
        let cand = (cost, a, b1 | b2);
        if best.map_or(true, |b| cand < b) {
            best = Some(cand);
        }
    }
    best.expect("at least one split")
}

struct PairState<'a> {
    rows: &'a [u64],
    a: u64,
    b: u64,
    count: usize,
}

impl<'a> PairState<'a> {
    fn new(rows: &'a [u64], a: u64, b: u64) -> Self {
        Self { rows, a, b, count: pair_count(rows, a, b) }
    }

    /// Change of `e(A, B)` when `out` leaves and `inn` joins the first set
    /// of `(first, second)`.
    fn delta(&self, first: u64, second: u64, out: usize, inn: usize) -> i64 {
        let rows = self.rows;
        let both = first & second;
        let in_second = |v: usize| second >> v & 1 == 1;
        let d2 = |v: usize| (rows[v] & second).count_ones() as i64;
        let di = |v: usize| (rows[v] & both).count_ones() as i64;
        let adjacent = rows[out] >> inn & 1 == 1;
        let mut delta = d2(inn) - d2(out);
        if in_second(out) {
            delta += di(out);
        }
        if in_second(inn) {
            delta -= di(inn) - (adjacent && in_second(out)) as i64;
        }
        delta
    }

    fn descend(&mut self) {
        loop {
            let mut best: Option<(i64, bool, usize, usize)> = None;
            for side in [false, true] {
                let (first, second) = if side { (self.b, self.a) } else { (self.a, self.b) };
                let all = low_mask(self.rows.len());
                for out in BitIter(first) {
                    for inn in BitIter(all & !first) {
                        let d = self.delta(first, second, out, inn);
                        if d < 0 && best.map_or(true, |(bd, ..)| d < bd) {
                            best = Some((d, side, out, inn));
                        }
                    }
                }
            }
            let Some((d, side, out, inn)) = best else { return };
            let set = if side { &mut self.b } else { &mut self.a };
            *set = (*set & !(1 << out)) | 1 << inn;
            self.count = (self.count as i64 + d) as usize;
            debug_assert_eq!(self.count, pair_count(self.rows, self.a, self.b));
        }
    }
}

fn resize<R: Rng>(mut mask: u64, n: usize, s: usize, rng: &mut R) -> u64 {
    let mut inside: Vec<usize> = BitIter(mask).collect();
    inside.shuffle(rng);
    while inside.len() > s {
        mask &= !(1 << inside.pop().expect("non-empty"));
    }
    let mut outside: Vec<usize> = BitIter(low_mask(n) & !mask).collect();
    outside.shuffle(rng);
    while (mask.count_ones() as usize) < s {
        mask |= 1 << outside.pop().expect("enough vertices");
    }
    mask
}

fn random_set<R: Rng>(n: usize, s: usize, rng: &mut R) -> u64 {
    resize(0, n, s, rng)
}

/// The starts are, per vertex `v`, the pair `(N[v], V \ N[v])` (two cliques)
/// and the pair `(V \ N(v), V \ N(v))` (one side of a bipartite graph),
/// trimmed or padded at random, followed by random pairs.
fn heuristic_min_pair(graph: &Graph, s: usize, restarts: usize, seed: u64) -> NicenessWitness {
    let n = graph.n();
    let rows = rows(graph);
    let all = low_mask(n);
    let mut rng = seeded(seed);
    let mut best: Option<(usize, u64, u64)> = None;
    for round in 0..restarts.max(1) {
        let (a, b) = if round < 2 * n {
            let v = round / 2;
            let closed = rows[v] | 1 << v;
            if round % 2 == 0 {
                (resize(closed, n, s, &mut rng), resize(all & !closed, n, s, &mut rng))
            } else {
                let side = resize(all & !rows[v], n, s, &mut rng);
                (side, side)
            }
        } else {
            (random_set(n, s, &mut rng), random_set(n, s, &mut rng))
        };
        let mut state = PairState::new(&rows, a, b);
        state.descend();
        let cand = (state.count, state.a, state.b);
        if best.map_or(true, |b| cand < b) {
            best = Some(cand);
        }
    }
    let (count, a, b) = best.expect("at least one restart");
    NicenessWitness { a: BitSet::from_mask(n, a), b: BitSet::from_mask(n, b), count }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{make_balanced_bipartite, make_two_cliques, perturb};
    use crate::Rational;

    fn q(text: &str) -> Rational {
        Rational::parse(text).unwrap()
    }

    /// Literal scan over all pairs of sets of size at least `s`.
    fn double_scan(graph: &Graph, s: usize) -> usize {
        let n = graph.n();
        let rows = rows(graph);
        let sets: Vec<u64> = (0u64..1 << n).filter(|m| m.count_ones() as usize >= s).collect();
        let mut best = usize::MAX;
        for &a in &sets {
            for &b in &sets {
                best = best.min(pair_count(&rows, a, b));
            }
        }
        best
    }

    #[test]
    fn bipartite_is_not_nice() {
        let g = make_balanced_bipartite(10).unwrap();
        let v = is_nice(g.graph(0), q("0.02"), NicenessMode::Exhaustive).unwrap();
        assert!(!v.nice);
        let w = v.witness.unwrap();
        assert_eq!(w.count, 0);
        assert_eq!(w.a, w.b);
        assert_eq!(g.graph(0).edges_within(&w.a), 0);
    }

    #[test]
    fn complete_graph_is_nice() {
        let v = is_nice(&Graph::complete(10), q("0.05"), NicenessMode::Exhaustive).unwrap();
        assert!(v.nice && v.exact && v.witness.is_none());
    }

    #[test]
    fn two_cliques_with_cross_edges() {
        let g = make_two_cliques(12).unwrap();
        let mut graph = g.graph(0).clone();
        for (u, v) in [(0, 6), (1, 9), (5, 11)] {
            graph.set_edge(u, v, true);
        }
        let v = is_nice(&graph, q("0.03"), NicenessMode::Exhaustive).unwrap();
        assert!(!v.nice);
        assert!(v.witness.unwrap().count <= 3);
    }

    #[test]
    fn extremal_examples() {
        let ec1 = make_two_cliques(12).unwrap();
        assert!(is_extremal(ec1.graph(0), q("0.3"), NicenessMode::Exhaustive).unwrap());
        assert!(!is_extremal(&Graph::complete(12), q("0.3"), NicenessMode::Exhaustive).unwrap());
        let ec2 = perturb(&make_balanced_bipartite(12).unwrap(), 10, 1);
        assert!(is_extremal(ec2.graph(0), q("0.3"), NicenessMode::Exhaustive).unwrap());
    }

    #[test]
    fn size_s_pairs_decide() {
        for seed in 0..50 {
            let n = 6 + seed as usize % 5;
            let g = crate::constructions::random_collection(n, 1, 0.5, seed).unwrap();
            for s in 1..=n {
                let fast = exhaustive_min_pair(g.graph(0), s);
                assert_eq!(fast.count, double_scan(g.graph(0), s), "seed {seed}, s {s}");
                assert_eq!(fast.count, g.graph(0).edges_between(&fast.a, &fast.b));
            }
        }
    }

    #[test]
    fn heuristic_finds_planted_structure() {
        for n in [20, 30] {
            let ec1 = make_two_cliques(n).unwrap();
            let v = is_nice(ec1.graph(0), q("0.01"), NicenessMode::auto(n)).unwrap();
            assert_eq!(v.witness.unwrap().count, 0);
            let ec2 = make_balanced_bipartite(n).unwrap();
            let v = is_nice(ec2.graph(0), q("0.01"), NicenessMode::auto(n)).unwrap();
            assert_eq!(v.witness.unwrap().count, 0);
        }
        let v = is_nice(&Graph::complete(24), q("0.05"), NicenessMode::auto(24)).unwrap();
        assert!(v.nice && !v.exact);
    }

    #[test]
    fn heuristic_delta_matches_recount() {
        let g = crate::constructions::random_collection(14, 1, 0.5, 9).unwrap();
        let rows = rows(g.graph(0));
        let mut rng = seeded(2);
        for _ in 0..200 {
            let a = random_set(14, 6, &mut rng);
            let b = random_set(14, 6, &mut rng);
            let st = PairState::new(&rows, a, b);
            let out = BitIter(a).nth(rng.gen_range(0..6)).unwrap();
            let cands: Vec<usize> = BitIter(low_mask(14) & !a).collect();
            let inn = cands[rng.gen_range(0..cands.len())];
            let a2 = (a & !(1 << out)) | 1 << inn;
            let expect = pair_count(&rows, a2, b) as i64 - st.count as i64;
            assert_eq!(st.delta(a, b, out, inn), expect);
        }
    }

    #[test]
    fn parameter_checks() {
        let g = Graph::complete(5);
        assert!(is_nice(&g, q("0.5"), NicenessMode::Exhaustive).is_err());
        assert!(is_nice(&g, q("0"), NicenessMode::Exhaustive).is_err());
        assert!(matches!(
            is_nice(&Graph::complete(17), q("0.1"), NicenessMode::Exhaustive),
            Err(StructureError::TooLarge { .. })
        ));
    }
}

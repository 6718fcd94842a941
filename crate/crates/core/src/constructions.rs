//! Generators for the extremal families and random instances.
//!
//! All generators use the canonical labelling: the larger side of any
//! near-equal split is `0..ceil(n/2)`. Random generators are deterministic
//! functions of their seed (ChaCha8).

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::{BitSet, VertexSet};
use crate::collection::{Graph, GraphCollection};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("n = {n} is too small (need at least {min})")]
    TooSmall { n: usize, min: usize },
    #[error("need at least one colour")]
    NoColors,
    #[error("minimum degree {d} is impossible on {n} vertices")]
    DegreeTooLarge { d: usize, n: usize },
    #[error("part size {size} is invalid for n = {n}")]
    BadPartSize { size: usize, n: usize },
    #[error("edge probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("invalid bipartition: {0}")]
    BadPartition(String),
}

pub(crate) fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// An ordered split `V = A ∪ B` into disjoint parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    pub a: VertexSet,
    pub b: VertexSet,
}

impl Bipartition {
    /// `A = {0, ..., ceil(n/2) - 1}`, `B` the rest.
    pub fn canonical(n: usize) -> Self {
        Self::with_first_part(n, n.div_ceil(2))
    }

    /// `A = {0, ..., size - 1}`.
    pub fn with_first_part(n: usize, size: usize) -> Self {
        let a = BitSet::from_members(n, 0..size);
        let b = a.complement();
        Self { a, b }
    }

    pub fn from_part(a: VertexSet) -> Self {
        let b = a.complement();
        Self { a, b }
    }

    pub fn n(&self) -> usize {
        self.a.universe()
    }

    pub fn is_equitable(&self) -> bool {
        self.a.len().abs_diff(self.b.len()) <= 1
    }

    /// Checks disjointness and coverage of `0..n`.
    pub fn check(&self, n: usize) -> Result<(), ConstructionError> {
        if self.a.universe() != n || self.b.universe() != n {
            return Err(ConstructionError::BadPartition(format!("universe differs from n = {n}")));
        }
        if !self.a.is_disjoint(&self.b) {
            return Err(ConstructionError::BadPartition("parts intersect".into()));
        }
        if self.a.len() + self.b.len() != n {
            return Err(ConstructionError::BadPartition("parts do not cover the vertex set".into()));
        }
        Ok(())
    }

    pub fn side_of(&self, v: usize) -> bool {
        self.a.contains(v)
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone() }
    }
}

/// Two disjoint cliques on the parts of `p` (EC1 pattern).
pub fn clique_pair_graph(p: &Bipartition) -> Graph {
    let n = p.n();
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if p.side_of(u) == p.side_of(v) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// The complete bipartite graph across `p` (EC2 pattern).
pub fn complete_bipartite_graph(p: &Bipartition) -> Graph {
    let n = p.n();
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if p.side_of(u) != p.side_of(v) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

/// EC1: two disjoint cliques on `ceil(n/2)` and `floor(n/2)` vertices.
pub fn make_two_cliques(n: usize) -> Result<GraphCollection, ConstructionError> {
    check_min(n, 2)?;
    Ok(single(clique_pair_graph(&Bipartition::canonical(n))))
}

/// EC2: complete bipartite with parts `ceil(n/2)` and `floor(n/2)`.
pub fn make_balanced_bipartite(n: usize) -> Result<GraphCollection, ConstructionError> {
    check_min(n, 2)?;
    Ok(single(complete_bipartite_graph(&Bipartition::canonical(n))))
}

/// `H_a^b`: colours `0..a` are EC1 copies and `a..a+b` EC2 copies, all on the
/// canonical equitable partition.
pub fn make_h(n: usize, a: usize, b: usize) -> Result<GraphCollection, ConstructionError> {
    check_min(n, 2)?;
    make_h_on(&Bipartition::canonical(n), a, b)
}

/// `H_a^b` on an arbitrary bipartition.
pub fn make_h_on(p: &Bipartition, a: usize, b: usize) -> Result<GraphCollection, ConstructionError> {
    if a + b == 0 {
        return Err(ConstructionError::NoColors);
    }
    p.check(p.n())?;
    let ec1 = clique_pair_graph(p);
    let ec2 = complete_bipartite_graph(p);
    let mut graphs = vec![ec1; a];
    graphs.extend(std::iter::repeat(ec2).take(b));
    Ok(GraphCollection::new(p.n(), graphs).expect("non-empty"))
}

/// What to put inside the complement of the independent part of a
/// half-split collection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BInternal {
    Empty,
    Complete,
}

/// `s` identical graphs with `A = {0, ..., floor(n/2)}` independent and
/// `A`–`B` complete.
pub fn make_half_split(n: usize, s: usize, b_internal: BInternal) -> Result<GraphCollection, ConstructionError> {
    check_min(n, 3)?;
    make_half_split_with_part(n, s, n / 2 + 1, b_internal)
}

/// Half-split shape with a custom independent part `A = {0, ..., size - 1}`.
pub fn make_half_split_with_part(
    n: usize,
    s: usize,
    size: usize,
    b_internal: BInternal,
) -> Result<GraphCollection, ConstructionError> {
    check_min(n, 2)?;
    if s == 0 {
        return Err(ConstructionError::NoColors);
    }
    if size == 0 || size >= n {
        return Err(ConstructionError::BadPartSize { size, n });
    }
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let (ua, va) = (u < size, v < size);
            let present = match (ua, va) {
                (true, true) => false,
                (false, false) => b_internal == BInternal::Complete,
                _ => true,
            };
            if present {
                g.set_edge(u, v, true);
            }
        }
    }
    Ok(GraphCollection::uniform(g, s).expect("non-empty"))
}

/// One colour-edge toggle `(color, u, v)` with `u < v`.
pub type Toggle = (usize, usize, usize);

/// Toggles `min(edits, colors * C(n,2))` distinct colour-edge pairs chosen
/// uniformly without replacement.
pub fn perturb(g: &GraphCollection, edits: usize, seed: u64) -> GraphCollection {
    perturb_with_log(g, edits, seed).0
}

/// [`perturb`] plus the list of toggled pairs, sorted.
pub fn perturb_with_log(g: &GraphCollection, edits: usize, seed: u64) -> (GraphCollection, Vec<Toggle>) {
    let n = g.n();
    let pairs = n * (n - 1) / 2;
    let total = pairs * g.colors();
    let k = edits.min(total);
    let mut rng = seeded(seed);
    let mut picks: Vec<usize> = index::sample(&mut rng, total, k).into_vec();
    picks.sort_unstable();
    let mut graphs = g.graphs().to_vec();
    let mut log = Vec::with_capacity(k);
    for idx in picks {
        let (c, rank) = (idx / pairs, idx % pairs);
        let (u, v) = unrank_pair(n, rank);
        graphs[c].toggle_edge(u, v);
        log.push((c, u, v));
    }
    (GraphCollection::new(n, graphs).expect("same shape"), log)
}

/// The `rank`-th pair `(u, v)`, `u < v`, in lexicographic order.
pub(crate) fn unrank_pair(n: usize, mut rank: usize) -> (usize, usize) {
    for u in 0..n {
        let row = n - 1 - u;
        if rank < row {
            return (u, u + 1 + rank);
        }
        rank -= row;
    }
    unreachable!("pair rank out of range")
}

/// `s` independent `G(n, p)` graphs.
pub fn random_collection(n: usize, s: usize, p: f64, seed: u64) -> Result<GraphCollection, ConstructionError> {
    check_min(n, 1)?;
    if s == 0 {
        return Err(ConstructionError::NoColors);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(ConstructionError::BadProbability(p));
    }
    let mut rng = seeded(seed);
    let graphs = (0..s).map(|_| gnp(n, p, &mut rng)).collect();
    Ok(GraphCollection::new(n, graphs).expect("non-empty"))
}

fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.set_edge(u, v, true);
            }
        }
    }
    g
}

const REJECTION_ATTEMPTS: usize = 8;
const DEFAULT_EDGE_PROBABILITY: f64 = 0.5;

/// `s` random graphs, each with minimum degree at least `d`: up to a few
/// `G(n, 1/2)` samples are tried, and the last one is repaired by adding
/// random edges at deficient vertices.
pub fn random_min_degree_collection(
    n: usize,
    s: usize,
    d: usize,
    seed: u64,
) -> Result<GraphCollection, ConstructionError> {
    check_min(n, 1)?;
    if s == 0 {
        return Err(ConstructionError::NoColors);
    }
    if d > n - 1 {
        return Err(ConstructionError::DegreeTooLarge { d, n });
    }
    let mut rng = seeded(seed);
    let graphs = (0..s).map(|_| min_degree_graph(n, d, &mut rng)).collect();
    Ok(GraphCollection::new(n, graphs).expect("non-empty"))
}

fn min_degree_graph<R: Rng>(n: usize, d: usize, rng: &mut R) -> Graph {
    let mut g = gnp(n, DEFAULT_EDGE_PROBABILITY, rng);
    for _ in 1..REJECTION_ATTEMPTS {
        if g.min_degree() >= d {
            return g;
        }
        g = gnp(n, DEFAULT_EDGE_PROBABILITY, rng);
    }
    loop {
        let deficient: Vec<usize> = (0..n).filter(|&v| g.degree(v) < d).collect();
        if deficient.is_empty() {
            return g;
        }
        let v = deficient[rng.gen_range(0..deficient.len())];
        let others: Vec<usize> = (0..n).filter(|&w| w != v && !g.has_edge(v, w)).collect();
        // prefer partners that are deficient too
        let needy: Vec<usize> = others.iter().copied().filter(|&w| g.degree(w) < d).collect();
        let pool = if needy.is_empty() { &others } else { &needy };
        let w = pool[rng.gen_range(0..pool.len())];
        g.set_edge(v, w, true);
    }
}

/// A uniformly random bipartition with `|A| = ceil(n/2)`.
pub fn random_equitable_bipartition<R: Rng>(n: usize, rng: &mut R) -> Bipartition {
    let members = index::sample(rng, n, n.div_ceil(2)).into_vec();
    Bipartition::from_part(BitSet::from_members(n, members))
}

fn single(g: Graph) -> GraphCollection {
    GraphCollection::uniform(g, 1).expect("one colour")
}

fn check_min(n: usize, min: usize) -> Result<(), ConstructionError> {
    if n < min {
        Err(ConstructionError::TooSmall { n, min })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom2(k: usize) -> usize {
        k * k.saturating_sub(1) / 2
    }

    #[test]
    fn two_cliques_examples() {
        let g = make_two_cliques(4).unwrap();
        assert_eq!(g.graph(0).edges().collect::<Vec<_>>(), vec![(0, 1), (2, 3)]);
        assert_eq!(g.min_degree(), 1);
        assert_eq!(make_two_cliques(6).unwrap().min_degree(), 2);
        // ceil(7/2) = 4 and floor(7/2) = 3
        assert_eq!(make_two_cliques(7).unwrap().graph(0).edge_count(), binom2(4) + binom2(3));
        assert!(make_two_cliques(1).is_err());
    }

    #[test]
    fn bipartite_examples() {
        assert_eq!(make_balanced_bipartite(5).unwrap().min_degree(), 2);
        assert_eq!(make_balanced_bipartite(2).unwrap().graph(0).edge_count(), 1);
        assert_eq!(make_balanced_bipartite(6).unwrap().graph(0).edge_count(), 3 * 3);
    }

    #[test]
    fn h_family_shape() {
        let g = make_h(6, 5, 1).unwrap();
        assert_eq!(g.colors(), 6);
        assert_eq!(g.min_degree(), 2);
        assert_eq!(make_h(7, 0, 7).unwrap().min_degree(), 3);
        let all_ec2 = make_h(6, 0, 6).unwrap();
        assert!(all_ec2.graphs().iter().all(|x| x == all_ec2.graph(0)));
        let p = Bipartition::canonical(6);
        let g = make_h(6, 3, 3).unwrap();
        assert_eq!(g.color_list(0, 1).unwrap().to_vec(), vec![0, 1, 2]);
        for c in 0..3 {
            assert_eq!(g.edge_count(c, &p.a, &p.b).unwrap(), 0);
            assert_eq!(g.edge_count(c, &p.a, &p.a).unwrap(), 3);
        }
        for c in 3..6 {
            assert_eq!(g.edge_count(c, &p.a, &p.b).unwrap(), 9);
            assert_eq!(g.edge_count(c, &p.a, &p.a).unwrap(), 0);
        }
        assert_eq!(make_h(4, 0, 0), Err(ConstructionError::NoColors));
    }

    #[test]
    fn half_split_examples() {
        let g = make_half_split(4, 4, BInternal::Empty).unwrap();
        assert_eq!(g.graph(0).edges().collect::<Vec<_>>(), vec![(0, 3), (1, 3), (2, 3)]);
        assert_eq!(make_half_split(8, 8, BInternal::Complete).unwrap().min_degree(), 3);
        // odd n: the computed value is floor(n/2), see the module docs
        assert_eq!(make_half_split(7, 7, BInternal::Complete).unwrap().min_degree(), 3);
        assert!(make_half_split(2, 2, BInternal::Empty).is_err());
    }

    #[test]
    fn half_split_counts() {
        for n in 3..10 {
            for flag in [BInternal::Empty, BInternal::Complete] {
                let g = make_half_split(n, 3, flag).unwrap();
                let p = Bipartition::with_first_part(n, n / 2 + 1);
                for c in 0..3 {
                    assert_eq!(g.edge_count(c, &p.a, &p.a).unwrap(), 0);
                    assert_eq!(g.edge_count(c, &p.a, &p.b).unwrap(), p.a.len() * p.b.len());
                }
            }
        }
    }

    #[test]
    fn perturb_is_exact_and_deterministic() {
        let g = make_h(8, 8, 0).unwrap();
        assert_eq!(perturb(&g, 0, 3), g);
        assert_eq!(perturb(&g, 1, 3).toggle_distance(&g), Some(1));
        assert_eq!(perturb(&g, 17, 9).toggle_distance(&g), Some(17));
        assert_eq!(perturb(&g, 5, 11), perturb(&g, 5, 11));
        let distinct: std::collections::HashSet<_> = (0..20).map(|s| perturb(&g, 5, s)).collect();
        assert!(distinct.len() > 15);
        let tiny = make_h(2, 1, 0).unwrap();
        assert_eq!(perturb(&tiny, 10, 0).toggle_distance(&tiny), Some(1));
    }

    #[test]
    fn unrank_covers_all_pairs() {
        let n = 6;
        let pairs: Vec<_> = (0..15).map(|r| unrank_pair(n, r)).collect();
        let expected: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        assert_eq!(pairs, expected);
    }

    #[test]
    fn min_degree_generator() {
        let full = random_min_degree_collection(6, 3, 5, 1).unwrap();
        assert!(full.graphs().iter().all(|g| g.edge_count() == 15));
        assert!(random_min_degree_collection(5, 2, 0, 4).is_ok());
        assert!(matches!(
            random_min_degree_collection(5, 2, 5, 4),
            Err(ConstructionError::DegreeTooLarge { .. })
        ));
        for seed in 0..100 {
            let g = random_min_degree_collection(8, 8, 4, seed).unwrap();
            assert!(g.min_degree() >= 4, "seed {seed}");
        }
        assert_eq!(
            random_min_degree_collection(8, 8, 4, 7).unwrap(),
            random_min_degree_collection(8, 8, 4, 7).unwrap()
        );
    }
}

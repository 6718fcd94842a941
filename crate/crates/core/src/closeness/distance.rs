//! Edit distance from a collection to the nearest member of a
//! non-Hamiltonian family.
//!
//! The cost of a target is the number of colour-edge toggles needed to turn
//! the collection into it. Once the bipartition is fixed every colour's cost
//! depends only on its three counts `e(A)`, `e(B)` and `e(A, B)`, so the
//! optimisation is over bipartitions with a fixed part size.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::{BitSet, VertexSet};
use crate::closeness::certificate::ColorType;
use crate::collection::GraphCollection;
use crate::constructions::{random_equitable_bipartition, seeded, Bipartition};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum DistanceMethod {
    /// Every bipartition with the right part size; `n <= 12`.
    Exhaustive,
    /// Swap descent from random equitable starts (plus the canonical split).
    LocalSearch { restarts: usize, seed: u64 },
}

impl DistanceMethod {
    pub const EXHAUSTIVE_MAX_N: usize = 12;

    /// Exhaustive up to `n = 12`, local search with 100 restarts beyond.
    pub fn auto(n: usize) -> Self {
        if n <= 12 {
            DistanceMethod::Exhaustive
        } else {
            DistanceMethod::LocalSearch { restarts: 100, seed: 0 }
        }
    }
}

/// The member of the family attaining the reported cost.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DistanceTarget {
    /// `H_a^b` on `partition`, colour `c` following `type_of[c]`.
    HFamily { partition: Bipartition, type_of: Vec<ColorType>, a: usize, b: usize },
    /// A half-split collection whose independent part is `a_part`.
    HalfSplit { a_part: VertexSet },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DistanceError {
    #[error("the H family needs exactly n colours (n = {n}, colours = {colors})")]
    ColorCount { n: usize, colors: usize },
    #[error("exhaustive mode supports n <= {max}, got n = {n}")]
    SizeCap { n: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport<T> {
    pub cost: usize,
    /// `cost / n^3`.
    pub normalized: T,
    pub target: DistanceTarget,
    /// Whether the cost is a proven minimum.
    pub exact: bool,
}

#[derive(Debug, Clone, Copy, Default)]
struct Counts {
    in_a: usize,
    in_b: usize,
    cross: usize,
}

/// Sizes of the three pair classes under a split with `|A| = k`.
#[derive(Debug, Clone, Copy)]
struct Shape {
    pairs_a: usize,
    pairs_b: usize,
    pairs_cross: usize,
}

impl Shape {
    fn new(n: usize, k: usize) -> Self {
        Self {
            pairs_a: k * k.saturating_sub(1) / 2,
            pairs_b: (n - k) * (n - k).saturating_sub(1) / 2,
            pairs_cross: k * (n - k),
        }
    }
}

trait Objective: Sync {
    fn part_size(&self, n: usize) -> usize;
    fn cost(&self, shape: Shape, counts: &[Counts]) -> usize;
    fn target(&self, shape: Shape, counts: &[Counts], partition: Bipartition) -> DistanceTarget;
}

struct HFamily {
    require_b_odd: bool,
}

impl HFamily {
    fn type_costs(shape: Shape, c: &Counts) -> (usize, usize) {
        let t1 = c.cross + (shape.pairs_a - c.in_a) + (shape.pairs_b - c.in_b);
        let t2 = c.in_a + c.in_b + (shape.pairs_cross - c.cross);
        (t1, t2)
    }

    fn assign(&self, shape: Shape, counts: &[Counts]) -> (usize, Vec<ColorType>) {
        let mut total = 0;
        let mut types = Vec::with_capacity(counts.len());
        let mut cheapest_flip: Option<(usize, usize)> = None;
        for (i, c) in counts.iter().enumerate() {
            let (t1, t2) = Self::type_costs(shape, c);
            total += t1.min(t2);
            types.push(if t2 < t1 { ColorType::Type2 } else { ColorType::Type1 });
            let extra = t1.abs_diff(t2);
            if cheapest_flip.map_or(true, |(best, _)| extra < best) {
                cheapest_flip = Some((extra, i));
            }
        }
        let b = types.iter().filter(|&&t| t == ColorType::Type2).count();
        if self.require_b_odd && b % 2 == 0 {
            if let Some((extra, i)) = cheapest_flip {
                total += extra;
                types[i] = match types[i] {
                    ColorType::Type1 => ColorType::Type2,
                    ColorType::Type2 => ColorType::Type1,
                };
            }
        }
        (total, types)
    }
}

impl Objective for HFamily {
    fn part_size(&self, n: usize) -> usize {
        n.div_ceil(2)
    }

    fn cost(&self, shape: Shape, counts: &[Counts]) -> usize {
        self.assign(shape, counts).0
    }

    fn target(&self, shape: Shape, counts: &[Counts], partition: Bipartition) -> DistanceTarget {
        let type_of = self.assign(shape, counts).1;
        let b = type_of.iter().filter(|&&t| t == ColorType::Type2).count();
        DistanceTarget::HFamily { a: type_of.len() - b, b, partition, type_of }
    }
}

struct HalfSplit;

impl Objective for HalfSplit {
    fn part_size(&self, n: usize) -> usize {
        n / 2 + 1
    }

    // edges inside B are unconstrained
    fn cost(&self, shape: Shape, counts: &[Counts]) -> usize {
        counts.iter().map(|c| c.in_a + (shape.pairs_cross - c.cross)).sum()
    }

    fn target(&self, _: Shape, _: &[Counts], partition: Bipartition) -> DistanceTarget {
        DistanceTarget::HalfSplit { a_part: partition.a }
    }
}

/// Distance to the nearest `H_a^b` with `a + b = n`, over equitable
/// bipartitions. With `require_b_odd` only odd `b` is allowed.
pub fn distance_to_h_family<T: Scalar>(
    g: &GraphCollection,
    require_b_odd: bool,
    method: DistanceMethod,
) -> Result<DistanceReport<T>, DistanceError> {
    if g.colors() != g.n() {
        return Err(DistanceError::ColorCount { n: g.n(), colors: g.colors() });
    }
    optimise(g, &HFamily { require_b_odd }, method)
}

/// Distance to the nearest half-split collection: `|A| = floor(n/2) + 1`,
/// `A` independent and complete to `B` in every colour, `B` arbitrary.
pub fn distance_to_half_split<T: Scalar>(
    g: &GraphCollection,
    method: DistanceMethod,
) -> Result<DistanceReport<T>, DistanceError> {
    optimise(g, &HalfSplit, method)
}

fn counts_for(g: &GraphCollection, p: &Bipartition) -> Vec<Counts> {
    g.graphs()
        .iter()
        .map(|graph| Counts {
            in_a: graph.edges_within(&p.a),
            in_b: graph.edges_within(&p.b),
            cross: graph.edges_between(&p.a, &p.b),
        })
        .collect()
}

fn optimise<T: Scalar, O: Objective>(
    g: &GraphCollection,
    obj: &O,
    method: DistanceMethod,
) -> Result<DistanceReport<T>, DistanceError> {
    let n = g.n();
    let k = obj.part_size(n).min(n);
    let shape = Shape::new(n, k);
    let (cost, partition, exact) = match method {
        DistanceMethod::Exhaustive => {
            if n > DistanceMethod::EXHAUSTIVE_MAX_N {
                return Err(DistanceError::SizeCap { n, max: DistanceMethod::EXHAUSTIVE_MAX_N });
            }
            let (cost, p) = exhaustive(g, obj, shape, k);
            (cost, p, true)
        }
        DistanceMethod::LocalSearch { restarts, seed } => {
            let (cost, p) = local_search(g, obj, shape, k, restarts, seed);
            (cost, p, false)
        }
    };
    let counts = counts_for(g, &partition);
    let n3 = T::from_usize(n).cube();
    Ok(DistanceReport {
        cost,
        normalized: T::from_usize(cost) / n3,
        target: obj.target(shape, &counts, partition),
        exact,
    })
}

fn exhaustive<O: Objective>(g: &GraphCollection, obj: &O, shape: Shape, k: usize) -> (usize, Bipartition) {
    let n = g.n();
    let rows: Vec<Vec<u64>> = g.graphs().iter().map(|gr| (0..n).map(|v| gr.row_mask(v)).collect()).collect();
    let all = crate::bitset::low_mask(n);
    let masks: Vec<u64> = k_subsets(n, k).collect();
    let (cost, mask) = masks
        .par_iter()
        .map(|&mask| {
            let rest = all & !mask;
            let counts: Vec<Counts> = rows
                .iter()
                .map(|r| {
                    let (mut twice_a, mut twice_b, mut cross) = (0, 0, 0);
                    for (v, &row) in r.iter().enumerate() {
                        if mask >> v & 1 == 1 {
                            twice_a += (row & mask).count_ones() as usize;
                            cross += (row & rest).count_ones() as usize;
                        } else {
                            twice_b += (row & rest).count_ones() as usize;
                        }
                    }
                    Counts { in_a: twice_a / 2, in_b: twice_b / 2, cross }
                })
                .collect();
            (obj.cost(shape, &counts), mask)
        })
        .min()
        .expect("at least one subset");
    (cost, Bipartition::from_part(BitSet::from_mask(n, mask)))
}

/// All `k`-subsets of `0..n` as masks in increasing order.
pub(crate) fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = u64> {
    assert!(n <= 63);
    let limit = 1u64 << n;
    let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
    let mut next = Some(first);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let low = cur & cur.wrapping_neg();
            let ripple = cur + low;
            let succ = (((ripple ^ cur) >> 2) / low) | ripple;
            (succ < limit).then_some(succ)
        };
        Some(cur)
    })
}

struct SwapState<'a> {
    g: &'a GraphCollection,
    in_a: Vec<bool>,
    /// `deg_a[c][v]` is the number of `c`-neighbours of `v` in `A`.
    deg_a: Vec<Vec<usize>>,
    counts: Vec<Counts>,
}

impl<'a> SwapState<'a> {
    fn new(g: &'a GraphCollection, p: &Bipartition) -> Self {
        let n = g.n();
        let in_a: Vec<bool> = (0..n).map(|v| p.a.contains(v)).collect();
        let deg_a = g
            .graphs()
            .iter()
            .map(|gr| (0..n).map(|v| gr.degree_into(v, &p.a)).collect())
            .collect();
        Self { g, in_a, deg_a, counts: counts_for(g, p) }
    }

    /// Counts after swapping `a` (in `A`) with `b` (in `B`).
    fn swapped_counts(&self, a: usize, b: usize, out: &mut [Counts]) {
        for (c, graph) in self.g.graphs().iter().enumerate() {
            let d = &self.deg_a[c];
            let ab = graph.has_edge(a, b) as usize;
            let da_a = d[a];
            let da_b = graph.degree(a) - d[a];
            let db_a = d[b];
            let db_b = graph.degree(b) - d[b];
            let old = self.counts[c];
            let in_a = old.in_a + db_a - ab - da_a;
            let in_b = old.in_b + da_b - ab - db_b;
            let cross = old.in_a + old.in_b + old.cross - in_a - in_b;
            out[c] = Counts { in_a, in_b, cross };
        }
    }

    fn apply(&mut self, a: usize, b: usize) {
        let mut next = vec![Counts::default(); self.counts.len()];
        self.swapped_counts(a, b, &mut next);
        self.counts = next;
        for (c, graph) in self.g.graphs().iter().enumerate() {
            for w in graph.neighbors(a) {
                self.deg_a[c][w] -= 1;
            }
            for w in graph.neighbors(b) {
                self.deg_a[c][w] += 1;
            }
        }
        self.in_a[a] = false;
        self.in_a[b] = true;
    }

    fn partition(&self) -> Bipartition {
        let n = self.in_a.len();
        Bipartition::from_part(BitSet::from_members(n, (0..n).filter(|&v| self.in_a[v])))
    }
}

fn descend<O: Objective>(state: &mut SwapState, obj: &O, shape: Shape) -> usize {
    let n = state.in_a.len();
    let mut current = obj.cost(shape, &state.counts);
    let mut scratch = vec![Counts::default(); state.counts.len()];
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for a in (0..n).filter(|&v| state.in_a[v]) {
            for b in (0..n).filter(|&v| !state.in_a[v]) {
                state.swapped_counts(a, b, &mut scratch);
                let cost = obj.cost(shape, &scratch);
                if cost < best.map_or(current, |(c, _, _)| c) {
                    best = Some((cost, a, b));
                }
            }
        }
        match best {
            Some((cost, a, b)) => {
                state.apply(a, b);
                current = cost;
            }
            None => return current,
        }
    }
}

fn local_search<O: Objective>(
    g: &GraphCollection,
    obj: &O,
    shape: Shape,
    k: usize,
    restarts: usize,
    seed: u64,
) -> (usize, Bipartition) {
    let n = g.n();
    let mut rng = seeded(seed);
    let mut best: Option<(usize, Bipartition)> = None;
    for round in 0..restarts.max(1) {
        let start = if round == 0 {
            Bipartition::with_first_part(n, k)
        } else {
            let p = random_equitable_bipartition(n, &mut rng);
            resize(p, k, &mut rng)
        };
        let mut state = SwapState::new(g, &start);
        let cost = descend(&mut state, obj, shape);
        if best.as_ref().map_or(true, |(b, _)| cost < *b) {
            best = Some((cost, state.partition()));
        }
    }
    best.expect("at least one restart")
}

fn resize<R: Rng>(p: Bipartition, k: usize, rng: &mut R) -> Bipartition {
    let mut a = p.a;
    while a.len() < k {
        let outside: Vec<usize> = a.complement().to_vec();
        a.insert(outside[rng.gen_range(0..outside.len())]);
    }
    while a.len() > k {
        let inside = a.to_vec();
        a.remove(inside[rng.gen_range(0..inside.len())]);
    }
    Bipartition::from_part(a)
}

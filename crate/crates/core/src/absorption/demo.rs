//! Building an absorbing cycle in a strongly stable collection.
//!
//! Families of rainbow 4-paths are fixed on colour triples taken from the
//! nice colours, one path per family is drawn by the randomized matcher, and
//! consecutive paths are joined through two fresh vertices `x y` whose
//! middle edge uses another nice colour.

use serde::{Deserialize, Serialize};

use super::cycle::{check_absorbing_cycle_with, AbsorbingCycleReport};
use super::kgraph::{matching_rounds, MatchedTuple, MATCHING_ROUNDS};
use crate::bitset::BitSet;
use crate::collection::GraphCollection;
use crate::scalar::{check_open_range, Scalar};
use crate::structure::stability::classify_with_analysis;
use crate::structure::{NicenessMode, StabilityStatus, StabilityVerdict, StructureError};
use crate::transversal::TransversalSubgraph;

/// Rejection-sampling attempts per drawn path before a family counts as empty.
const SAMPLE_ATTEMPTS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DemoParams<T> {
    pub lambda: T,
    pub gamma: T,
    pub alpha: T,
    pub eps: T,
    pub delta: T,
    pub mode: NicenessMode,
}

impl<T: Scalar> DemoParams<T> {
    /// `lambda` with `gamma = 1/2`, `alpha = 1/50`, `eps = delta = 1/5`.
    pub fn new(lambda: T, n: usize) -> Self {
        Self {
            lambda,
            gamma: T::half(),
            alpha: T::from_ratio(1, 50),
            eps: T::from_ratio(1, 5),
            delta: T::from_ratio(1, 5),
            mode: NicenessMode::auto(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum DemoFailure {
    /// Only strongly stable collections are handled.
    NotStronglyStable { status: StabilityStatus },
    /// `lambda n / 6` rounds down to no path family.
    NoFamilies,
    TooFewNiceColors { needed: usize, available: usize },
    /// Rejection sampling found no path in any family.
    NoPaths,
    NoConnection { step: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemoOutcome<T> {
    pub cycle: Option<TransversalSubgraph>,
    pub failure: Option<DemoFailure>,
    pub stability: StabilityVerdict<T>,
    pub families: usize,
    /// The paths kept by the matcher, tagged with their family.
    pub paths: Vec<MatchedTuple>,
    pub matching_guaranteed: bool,
    pub matching_rounds: usize,
    /// Fewest matched paths that are `c`-absorbing of any `(v, v')`.
    pub min_coverage: usize,
    /// Absorbing check with parameters `(1, 0, lambda, lambda^2)`.
    pub report: Option<AbsorbingCycleReport<T>>,
}

pub fn build_absorbing_cycle_demo<T: Scalar>(
    g: &GraphCollection,
    params: &DemoParams<T>,
    seed: u64,
) -> Result<DemoOutcome<T>, StructureError> {
    check_open_range("lambda", params.lambda, T::one()).map_err(StructureError::Parameter)?;
    let (stability, analysis) =
        classify_with_analysis(g, params.gamma, params.alpha, params.eps, params.delta, params.mode)?;
    let mut outcome = DemoOutcome {
        cycle: None,
        failure: None,
        stability: stability.clone(),
        families: 0,
        paths: Vec::new(),
        matching_guaranteed: false,
        matching_rounds: 0,
        min_coverage: 0,
        report: None,
    };
    let fail = |mut outcome: DemoOutcome<T>, failure| {
        outcome.failure = Some(failure);
        Ok(outcome)
    };
    if stability.status != StabilityStatus::StronglyStable {
        return fail(outcome, DemoFailure::NotStronglyStable { status: stability.status });
    }
    let n = g.n();
    let families = (params.lambda * T::from_usize(n) / T::from_usize(6)).floor_int().max(0) as usize;
    outcome.families = families;
    if families == 0 || n < 6 {
        return fail(outcome, DemoFailure::NoFamilies);
    }
    let nice = stability.nice_colors.to_vec();
    // three colours per family plus one nice connector per join
    if nice.len() < 4 * families {
        return fail(outcome, DemoFailure::TooFewNiceColors { needed: 4 * families, available: nice.len() });
    }
    let family_colors: Vec<[usize; 3]> = nice.chunks(3).take(families).map(|c| [c[0], c[1], c[2]]).collect();

    let sample = |i: usize, rng: &mut rand_chacha::ChaCha8Rng| {
        let [a, b, c] = family_colors[i];
        (0..SAMPLE_ATTEMPTS).find_map(|_| {
            let t: Vec<usize> = rand::seq::index::sample(rng, n, 4).into_vec();
            (g.has_edge(a, t[0], t[1]) && g.has_edge(b, t[1], t[2]) && g.has_edge(c, t[2], t[3])).then_some(t)
        })
    };
    let absorbing = |e: &MatchedTuple, c: usize, v: usize, w: usize| {
        let t = &e.tuple;
        !t.contains(&v) && !t.contains(&w) && g.has_edge(c, t[1], v) && g.has_edge(family_colors[e.index][1], t[2], w)
    };
    let colors = g.colors();
    let coverage = |m: &[MatchedTuple]| {
        let mut out = Vec::with_capacity(colors * n * n);
        for c in 0..colors {
            for v in 0..n {
                for w in 0..n {
                    out.push(m.iter().filter(|e| absorbing(e, c, v, w)).count());
                }
            }
        }
        out
    };
    let eps = params.alpha / T::from_usize(5);
    let matched = matching_rounds(families, eps, MATCHING_ROUNDS, seed, sample, coverage);
    outcome.matching_guaranteed = matched.guaranteed;
    outcome.matching_rounds = matched.rounds;
    outcome.min_coverage = matched.coverage.iter().copied().min().unwrap_or(0);
    let mut paths = matched.matching;
    paths.sort_by_key(|e| e.index);
    outcome.paths = paths.clone();
    if paths.is_empty() {
        return fail(outcome, DemoFailure::NoPaths);
    }

    let mut used_vertices = BitSet::new(n);
    let mut used_colors = BitSet::new(colors);
    for e in &paths {
        e.tuple.iter().for_each(|&v| {
            used_vertices.insert(v);
        });
        family_colors[e.index].iter().for_each(|&c| {
            used_colors.insert(c);
        });
    }
    let nice_set = &stability.nice_colors;
    let mut order = Vec::new();
    let mut steps = Vec::new();
    for (step, e) in paths.iter().enumerate() {
        let next = &paths[(step + 1) % paths.len()];
        order.extend_from_slice(&e.tuple);
        steps.extend_from_slice(&family_colors[e.index]);
        let Some((x, y, [c1, c3, c2])) = connect(g, e.tuple[3], next.tuple[0], &used_vertices, &used_colors, nice_set) else {
            return fail(outcome, DemoFailure::NoConnection { step });
        };
        for v in [x, y] {
            used_vertices.insert(v);
        }
        for c in [c1, c2, c3] {
            used_colors.insert(c);
        }
        order.extend([x, y]);
        steps.extend([c1, c3, c2]);
    }
    let cycle = TransversalSubgraph::cycle_from_order(&order, &steps);
    debug_assert!(cycle.validate(g).is_ok());
    let lambda = params.lambda;
    outcome.report =
        check_absorbing_cycle_with(g, &cycle, &BitSet::full(colors), &analysis, T::zero(), lambda * lambda).ok();
    outcome.cycle = Some(cycle);
    Ok(outcome)
}

/// Fresh `x, y` and colours `(c1, c3, c2)` with `end -c1- x -c3- y -c2- start`,
/// `c3` nice. Non-nice colours are spent on the outer edges first.
fn connect(
    g: &GraphCollection,
    end: usize,
    start: usize,
    used_vertices: &BitSet,
    used_colors: &BitSet,
    nice: &BitSet,
) -> Option<(usize, usize, [usize; 3])> {
    let free: Vec<usize> = (0..g.colors()).filter(|&c| !used_colors.contains(c)).collect();
    let mut outer: Vec<usize> = free.iter().copied().filter(|&c| !nice.contains(c)).collect();
    outer.extend(free.iter().copied().filter(|&c| nice.contains(c)));
    let unused = |v: usize| !used_vertices.contains(v);
    for &c3 in free.iter().filter(|&&c| nice.contains(c)) {
        for &c1 in outer.iter().filter(|&&c| c != c3) {
            let xs: Vec<usize> = g.graph(c1).neighbors(end).filter(|&x| unused(x)).collect();
            for &c2 in outer.iter().filter(|&&c| c != c3 && c != c1) {
                for y in g.graph(c2).neighbors(start).filter(|&y| unused(y)) {
                    if let Some(&x) = xs.iter().find(|&&x| x != y && g.has_edge(c3, x, y)) {
                        return Some((x, y, [c1, c3, c2]));
                    }
                }
            }
        }
    }
    None
}

//! Directed k-graph collections and the randomized transversal matching.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::AbsorptionError;
use crate::constructions::seeded;
use crate::scalar::{check_open_range, Scalar};

/// Sampling rounds before the best attempt is returned unguaranteed.
pub const MATCHING_ROUNDS: usize = 20;

/// Directed k-graphs on `0..n`. Each edge set is kept as sorted base-`n`
/// codes of its tuples, so membership is a binary search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedKGraphCollection {
    n: usize,
    k: usize,
    multi: bool,
    graphs: Vec<Vec<u64>>,
}

impl DirectedKGraphCollection {
    /// Builds a collection from explicit tuples. Without `multi`, repeated
    /// tuples in one graph collapse.
    pub fn new(n: usize, k: usize, multi: bool, graphs: Vec<Vec<Vec<usize>>>) -> Result<Self, AbsorptionError> {
        let mut coded = Vec::with_capacity(graphs.len());
        for (i, tuples) in graphs.iter().enumerate() {
            let mut codes = tuples
                .iter()
                .map(|t| {
                    check_tuple(n, k, t).map_err(|reason| AbsorptionError::BadTuple { graph: i, tuple: t.clone(), reason })?;
                    Ok(encode(n, t))
                })
                .collect::<Result<Vec<_>, AbsorptionError>>()?;
            codes.sort_unstable();
            if !multi {
                codes.dedup();
            }
            coded.push(codes);
        }
        Self::from_codes(n, k, multi, coded)
    }

    /// Builds graph `i` from every `k`-tuple of distinct vertices accepted by
    /// `keep(i, tuple)`.
    pub fn from_predicate(
        n: usize,
        k: usize,
        graphs: usize,
        keep: impl Fn(usize, &[usize]) -> bool,
    ) -> Result<Self, AbsorptionError> {
        code_space(n, k)?;
        let mut coded = vec![Vec::new(); graphs];
        let mut tuple = vec![0usize; k];
        for_each_tuple(n, k, &mut tuple, 0, &mut |t| {
            let code = encode(n, t);
            for (i, codes) in coded.iter_mut().enumerate() {
                if keep(i, t) {
                    codes.push(code);
                }
            }
        });
        Self::from_codes(n, k, false, coded)
    }

    fn from_codes(n: usize, k: usize, multi: bool, graphs: Vec<Vec<u64>>) -> Result<Self, AbsorptionError> {
        if k == 0 {
            return Err(AbsorptionError::Arity(k));
        }
        code_space(n, k)?;
        Ok(Self { n, k, multi, graphs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_multi(&self) -> bool {
        self.multi
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Number of tuples of graph `i`, with multiplicity.
    pub fn edge_count(&self, i: usize) -> usize {
        self.graphs[i].len()
    }

    pub fn contains(&self, i: usize, tuple: &[usize]) -> bool {
        tuple.len() == self.k
            && check_tuple(self.n, self.k, tuple).is_ok()
            && self.graphs[i].binary_search(&encode(self.n, tuple)).is_ok()
    }

    pub fn tuples(&self, i: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.graphs[i].iter().map(|&c| decode(self.n, self.k, c))
    }

    /// `|E(self_j) ∩ E(other_i)|`, counting multiplicity on the `self` side.
    pub fn intersection_count(&self, j: usize, other: &DirectedKGraphCollection, i: usize) -> usize {
        let (a, b) = (&self.graphs[j], &other.graphs[i]);
        let (mut x, mut y, mut count) = (0, 0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    x += 1;
                }
            }
        }
        count
    }

    fn sample<R: Rng>(&self, i: usize, rng: &mut R) -> Option<Vec<usize>> {
        let codes = &self.graphs[i];
        (!codes.is_empty()).then(|| decode(self.n, self.k, codes[rng.gen_range(0..codes.len())]))
    }
}

fn check_tuple(n: usize, k: usize, t: &[usize]) -> Result<(), String> {
    if t.len() != k {
        return Err(format!("expected {k} vertices, found {}", t.len()));
    }
    if let Some(&v) = t.iter().find(|&&v| v >= n) {
        return Err(format!("vertex {v} out of range"));
    }
    for (x, &v) in t.iter().enumerate() {
        if t[..x].contains(&v) {
            return Err(format!("vertex {v} repeated"));
        }
    }
    Ok(())
}

fn code_space(n: usize, k: usize) -> Result<(), AbsorptionError> {
    (n as u64)
        .checked_pow(k as u32)
        .map(|_| ())
        .ok_or(AbsorptionError::CodeOverflow { n, k })
}

fn encode(n: usize, t: &[usize]) -> u64 {
    t.iter().fold(0u64, |acc, &v| acc * n as u64 + v as u64)
}

fn decode(n: usize, k: usize, mut code: u64) -> Vec<usize> {
    let mut t = vec![0; k];
    for slot in t.iter_mut().rev() {
        *slot = (code % n as u64) as usize;
        code /= n as u64;
    }
    t
}

fn for_each_tuple(n: usize, k: usize, t: &mut Vec<usize>, depth: usize, f: &mut impl FnMut(&[usize])) {
    if depth == k {
        f(t);
        return;
    }
    for v in 0..n {
        if !t[..depth].contains(&v) {
            t[depth] = v;
            for_each_tuple(n, k, t, depth + 1, f);
        }
    }
}

/// Hypothesis audit: `e(H_i) >= eps n^k` for all `i`, and every target meets
/// at least `eps t` of the `H_i` in at least `eps n^k` tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// Indices `i` with `e(H_i) < eps n^k`.
    pub sparse_graphs: Vec<usize>,
    /// Targets `j` that meet too few graphs densely.
    pub weak_targets: Vec<usize>,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.sparse_graphs.is_empty() && self.weak_targets.is_empty()
    }
}

/// A chosen tuple of graph `index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchedTuple {
    pub index: usize,
    pub tuple: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalMatchingReport<T> {
    pub matching: Vec<MatchedTuple>,
    /// `coverage[j] = |E(Z_j) ∩ E(M)|`.
    pub coverage: Vec<usize>,
    pub eps: T,
    /// `(1 - eps^2/4) t`.
    pub size_target: T,
    /// `eps^2 t / 4`.
    pub coverage_target: T,
    /// Both guarantees hold for the returned matching.
    pub guaranteed: bool,
    /// Rounds sampled, including the successful one.
    pub rounds: usize,
    /// Intersecting pairs in the sample the matching came from.
    pub intersecting_pairs: usize,
    pub hypotheses: Option<HypothesisReport>,
}

pub fn check_hypotheses<T: Scalar>(
    h: &DirectedKGraphCollection,
    z: &DirectedKGraphCollection,
    eps: T,
) -> HypothesisReport {
    let floor = eps * T::from_usize(h.n()).powi(h.k());
    let t = T::from_usize(h.len());
    let sparse_graphs = (0..h.len()).filter(|&i| T::from_usize(h.edge_count(i)) < floor).collect();
    let weak_targets = (0..z.len())
        .filter(|&j| {
            let dense = (0..h.len()).filter(|&i| T::from_usize(z.intersection_count(j, h, i)) >= floor).count();
            T::from_usize(dense) < eps * t
        })
        .collect();
    HypothesisReport { sparse_graphs, weak_targets }
}

/// Samples one tuple per `H_i`, drops one tuple of every intersecting pair
/// and counts hits on each `Z_j`. Up to [`MATCHING_ROUNDS`] rounds are drawn
/// until size and coverage guarantees both hold; otherwise the best attempt
/// comes back with `guaranteed = false`.
pub fn random_transversal_matching<T: Scalar>(
    h: &DirectedKGraphCollection,
    z: &DirectedKGraphCollection,
    eps: T,
    seed: u64,
) -> Result<TransversalMatchingReport<T>, AbsorptionError> {
    check_open_range("eps", eps, T::one()).map_err(AbsorptionError::Parameter)?;
    if z.n() != h.n() || z.k() != h.k() {
        return Err(AbsorptionError::Mismatch(format!(
            "H lives on (n, k) = ({}, {}) but Z on ({}, {})",
            h.n(),
            h.k(),
            z.n(),
            z.k()
        )));
    }
    let hypotheses = check_hypotheses(h, z, eps);
    let mut report = matching_rounds(
        h.len(),
        eps,
        MATCHING_ROUNDS,
        seed,
        |i, rng| h.sample(i, rng),
        |m| (0..z.len()).map(|j| m.iter().filter(|e| z.contains(j, &e.tuple)).count()).collect(),
    );
    report.hypotheses = Some(hypotheses);
    Ok(report)
}

/// The round loop shared with the absorbing-cycle pipeline, where targets
/// are too many to list and coverage is computed directly.
pub(crate) fn matching_rounds<T: Scalar>(
    t: usize,
    eps: T,
    rounds: usize,
    seed: u64,
    mut sample: impl FnMut(usize, &mut rand_chacha::ChaCha8Rng) -> Option<Vec<usize>>,
    coverage: impl Fn(&[MatchedTuple]) -> Vec<usize>,
) -> TransversalMatchingReport<T> {
    let mut rng = seeded(seed);
    let quarter_sq = eps * eps / T::from_usize(4);
    let size_target = (T::one() - quarter_sq) * T::from_usize(t);
    let coverage_target = quarter_sq * T::from_usize(t);
    let mut best: Option<(bool, usize, usize, TransversalMatchingReport<T>)> = None;
    let mut used_rounds = 0;
    for _ in 0..rounds.max(1) {
        used_rounds += 1;
        let drawn: Vec<MatchedTuple> =
            (0..t).filter_map(|i| sample(i, &mut rng).map(|tuple| MatchedTuple { index: i, tuple })).collect();
        let intersecting_pairs = drawn
            .iter()
            .enumerate()
            .map(|(x, e)| drawn[..x].iter().filter(|f| f.tuple.iter().any(|v| e.tuple.contains(v))).count())
            .sum();
        let mut kept: Vec<MatchedTuple> = Vec::with_capacity(drawn.len());
        for e in drawn {
            if kept.iter().all(|f| f.tuple.iter().all(|v| !e.tuple.contains(v))) {
                kept.push(e);
            }
        }
        let cov = coverage(&kept);
        let min_cov = cov.iter().copied().min().unwrap_or(usize::MAX);
        let guaranteed = T::from_usize(kept.len()) >= size_target
            && cov.iter().all(|&c| T::from_usize(c) >= coverage_target);
        let key = (guaranteed, kept.len(), min_cov);
        if best.as_ref().map_or(true, |b| key > (b.0, b.1, b.2)) {
            best = Some((
                guaranteed,
                kept.len(),
                min_cov,
                TransversalMatchingReport {
                    matching: kept,
                    coverage: cov,
                    eps,
                    size_target,
                    coverage_target,
                    guaranteed,
                    rounds: 0,
                    intersecting_pairs,
                    hypotheses: None,
                },
            ));
        }
        if guaranteed {
            break;
        }
    }
    let mut report = best.expect("at least one round").3;
    report.rounds = used_rounds;
    report
}

trait Power {
    fn powi(self, k: usize) -> Self;
}

impl<T: Scalar> Power for T {
    fn powi(self, k: usize) -> Self {
        (0..k).fold(T::one(), |acc, _| acc * self)
    }
}

//! Characteristic partitions of extremal graphs.
//!
//! Starting from a sparse pair `X, Y` (the `mu`-niceness witness with
//! `mu = eps^3`), put `U = X ∩ Y` and `D = V \ (X ∪ Y)`.
//!
//! - If `|U| >= 2 sqrt(mu) n` the graph looks bipartite. Drop from `U` the
//!   vertices with at most `(1/2 - 3 sqrt(mu)) n` neighbours in `D`, then drop
//!   from `D` those with at most that many neighbours in what is left of `U`.
//!   `A` comes from `U` and `B` from `D`.
//! - Otherwise it looks like two cliques. Drop from `X` the vertices with more
//!   than `sqrt(mu) n` neighbours in `Y` and vice versa; `A` comes from
//!   `X \ Y` and `B` from `Y \ X`.
//!
//! Both parts are cut to `floor((1/2 - eps) n)` vertices, keeping those with
//! the largest degree into the pool the invariant constrains (the own pool
//! for two cliques, the opposite pool for bipartite), lower index first on
//! ties. The result is checked against the defining inequalities and
//! discarded if it fails them.

use serde::{Deserialize, Serialize};

use super::niceness::{extremality, NicenessMode};
use super::StructureError;
use crate::bitset::{BitSet, VertexSet};
use crate::collection::Graph;
use crate::constructions::Bipartition;
use crate::scalar::{ge_scaled_sqrt, le_scaled_sqrt, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremalKind {
    /// Close to two disjoint cliques.
    Ec1,
    /// Close to a complete bipartite graph.
    Ec2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacteristicPartition {
    pub a: VertexSet,
    pub b: VertexSet,
    pub c: VertexSet,
    pub kind: ExtremalKind,
}

impl CharacteristicPartition {
    pub fn contains_good(&self, v: usize) -> bool {
        self.a.contains(v) || self.b.contains(v)
    }

    /// Largest `|P △ Q|` over the two parts under the better pairing of
    /// `(A, B)` with the planted sides.
    pub fn distance_to(&self, planted: &Bipartition) -> usize {
        let straight = self.a.symmetric_difference_len(&planted.a).max(self.b.symmetric_difference_len(&planted.b));
        let crossed = self.a.symmetric_difference_len(&planted.b).max(self.b.symmetric_difference_len(&planted.a));
        straight.min(crossed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtractionCase {
    /// `|U| >= 2 sqrt(mu) n`.
    LargeIntersection,
    /// `|U| < 2 sqrt(mu) n`.
    SmallIntersection,
}

/// Everything the extraction learned, including why it gave up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction<T> {
    pub eps: T,
    pub mu: T,
    pub target_size: usize,
    pub case: ExtractionCase,
    /// All but at most `eps^3 n` vertices have degree at least
    /// `(1/2 - eps^3) n`.
    pub degree_hypothesis: bool,
    /// Pool sizes after stripping.
    pub pool_sizes: (usize, usize),
    pub partition: Option<CharacteristicPartition>,
    pub failure: Option<String>,
}

/// Numeric thresholds of the extraction, in one place.
struct Thresholds<T> {
    n: usize,
    eps: T,
    mu: T,
}

impl<T: Scalar> Thresholds<T> {
    fn nf(&self) -> T {
        T::from_usize(self.n)
    }

    /// `floor((1/2 - eps) n)`.
    fn target_size(&self) -> usize {
        ((T::half() - self.eps) * self.nf()).floor_int().max(0) as usize
    }

    /// `|U| >= 2 sqrt(mu) n`.
    fn large_intersection(&self, u: usize) -> bool {
        ge_scaled_sqrt(T::from_usize(u), T::from_usize(2 * self.n), self.mu)
    }

    /// `d <= (1/2 - 3 sqrt(mu)) n`, i.e. `n/2 - d >= 3 sqrt(mu) n`.
    fn weak_cross(&self, d: usize) -> bool {
        ge_scaled_sqrt(T::half() * self.nf() - T::from_usize(d), T::from_usize(3 * self.n), self.mu)
    }

    /// `d > sqrt(mu) n`.
    fn heavy_cross(&self, d: usize) -> bool {
        !le_scaled_sqrt(T::from_usize(d), self.nf(), self.mu)
    }

    /// `d >= (1/2 - 2 eps) n`.
    fn degree_floor(&self, d: usize) -> bool {
        T::from_usize(d) >= (T::half() - T::from_usize(2) * self.eps) * self.nf()
    }

    /// `e <= eps n^2`.
    fn sparse(&self, e: usize) -> bool {
        T::from_usize(e) <= self.eps * self.nf() * self.nf()
    }

    fn degree_hypothesis(&self, graph: &Graph) -> bool {
        let low = (0..self.n)
            .filter(|&v| T::from_usize(graph.degree(v)) < (T::half() - self.mu) * self.nf())
            .count();
        T::from_usize(low) <= self.mu * self.nf()
    }
}

/// Runs the extraction on an `eps`-extremal graph.
pub fn extract_characteristic<T: Scalar>(
    graph: &Graph,
    eps: T,
    mode: NicenessMode,
) -> Result<Extraction<T>, StructureError> {
    let verdict = extremality(graph, eps, mode)?;
    let Some(witness) = verdict.witness else {
        return Err(StructureError::NotExtremal);
    };
    let n = graph.n();
    let th = Thresholds { n, eps, mu: eps.cube() };
    let target = th.target_size();
    let (x, y) = (witness.a, witness.b);
    let u = x.intersection(&y);
    let d = x.union(&y).complement();

    let (case, kind, pool_a, pool_b) = if th.large_intersection(u.len()) {
        let u0 = BitSet::from_members(n, u.iter().filter(|&v| th.weak_cross(graph.degree_into(v, &d))));
        let u_kept = u.difference(&u0);
        let d0 = BitSet::from_members(n, d.iter().filter(|&v| th.weak_cross(graph.degree_into(v, &u_kept))));
        (ExtractionCase::LargeIntersection, ExtremalKind::Ec2, u_kept, d.difference(&d0))
    } else {
        let x_heavy = x.iter().filter(|&v| th.heavy_cross(graph.degree_into(v, &y)));
        let y_heavy = y.iter().filter(|&v| th.heavy_cross(graph.degree_into(v, &x)));
        let x_kept = x.difference(&BitSet::from_members(n, x_heavy));
        let y_kept = y.difference(&BitSet::from_members(n, y_heavy));
        let x1 = x_kept.difference(&y_kept);
        let y1 = y_kept.difference(&x_kept);
        (ExtractionCase::SmallIntersection, ExtremalKind::Ec1, x1, y1)
    };
    let mut out = Extraction {
        eps,
        mu: th.mu,
        target_size: target,
        case,
        degree_hypothesis: th.degree_hypothesis(graph),
        pool_sizes: (pool_a.len(), pool_b.len()),
        partition: None,
        failure: None,
    };
    if pool_a.len() < target || pool_b.len() < target {
        out.failure = Some(format!(
            "stripped pools have {} and {} vertices, need {target}",
            pool_a.len(),
            pool_b.len()
        ));
        return Ok(out);
    }
    let (ref_a, ref_b) = match kind {
        ExtremalKind::Ec1 => (&pool_a, &pool_b),
        ExtremalKind::Ec2 => (&pool_b, &pool_a),
    };
    let a = keep_best(graph, &pool_a, ref_a, target);
    let b = keep_best(graph, &pool_b, ref_b, target);
    let c = a.union(&b).complement();
    let partition = CharacteristicPartition { a, b, c, kind };
    match check_invariants(graph, &partition, eps) {
        Ok(()) => out.partition = Some(partition),
        Err(why) => out.failure = Some(why),
    }
    Ok(out)
}

/// The characteristic partition, or `None` when the extraction comes up
/// short on this input.
pub fn characteristic_partition<T: Scalar>(
    graph: &Graph,
    eps: T,
    mode: NicenessMode,
) -> Result<Option<CharacteristicPartition>, StructureError> {
    Ok(extract_characteristic(graph, eps, mode)?.partition)
}

fn keep_best(graph: &Graph, pool: &VertexSet, reference: &VertexSet, size: usize) -> VertexSet {
    let mut ranked: Vec<(usize, usize)> = pool.iter().map(|v| (graph.degree_into(v, reference), v)).collect();
    ranked.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
    BitSet::from_members(graph.n(), ranked.into_iter().take(size).map(|(_, v)| v))
}

/// Re-checks the defining inequalities of a characteristic partition.
pub fn check_invariants<T: Scalar>(graph: &Graph, p: &CharacteristicPartition, eps: T) -> Result<(), String> {
    let n = graph.n();
    let th = Thresholds { n, eps, mu: eps.cube() };
    if !p.a.is_disjoint(&p.b) || !p.a.is_disjoint(&p.c) || !p.b.is_disjoint(&p.c) {
        return Err("parts overlap".into());
    }
    if p.a.len() + p.b.len() + p.c.len() != n {
        return Err("parts do not cover the vertex set".into());
    }
    if p.a.len() != th.target_size() || p.b.len() != th.target_size() {
        return Err(format!("|A| = {}, |B| = {}, expected {}", p.a.len(), p.b.len(), th.target_size()));
    }
    let (into_a, into_b) = match p.kind {
        ExtremalKind::Ec1 => (&p.a, &p.b),
        ExtremalKind::Ec2 => (&p.b, &p.a),
    };
    if let Some(v) = p.a.iter().find(|&v| !th.degree_floor(graph.degree_into(v, into_a))) {
        return Err(format!("vertex {v} of A is below the degree floor"));
    }
    if let Some(v) = p.b.iter().find(|&v| !th.degree_floor(graph.degree_into(v, into_b))) {
        return Err(format!("vertex {v} of B is below the degree floor"));
    }
    let sparse = match p.kind {
        ExtremalKind::Ec1 => th.sparse(graph.edges_between(&p.a, &p.b)),
        ExtremalKind::Ec2 => th.sparse(graph.edges_within(&p.a).min(graph.edges_within(&p.b))),
    };
    if !sparse {
        return Err("the sparse pair has more than eps n^2 edges".into());
    }
    Ok(())
}

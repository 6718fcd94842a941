//! Stability classification of perturbed extremal collections.

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{ExperimentReport, HarnessError, InstanceOutcome, InstanceRecord};
use crate::bitset::BitSet;
use crate::closeness::{distance_to_h_family, distance_to_half_split, DistanceMethod};
use crate::collection::{Graph, GraphCollection};
use crate::constructions::{
    complete_bipartite_graph, make_h, Bipartition, make_half_split, perturb, random_equitable_bipartition, seeded, BInternal,
};
use crate::structure::{classify_stability, NicenessMode, StabilityStatus};
use crate::Rational;

/// Exhaustive niceness and distances keep this experiment small.
pub const BOUNDARY_MAX_N: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryParams {
    pub gamma: Rational,
    pub alpha: Rational,
    pub eps: Rational,
    pub delta: Rational,
}

impl Default for BoundaryParams {
    fn default() -> Self {
        Self {
            gamma: Rational::new(1, 2),
            alpha: Rational::new(1, 20),
            eps: Rational::new(1, 20),
            delta: Rational::new(1, 5),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryRow {
    pub edits: usize,
    pub planted: StabilityStatus,
    pub status: StabilityStatus,
    pub nice_colors: usize,
    pub cross_edges: usize,
    pub h_distance: usize,
    pub half_split_distance: usize,
}

/// Half the colours complete bipartite on a random equitable bipartition
/// `(A, B)`, half on `(A', B')` where `A'` takes half of `A` and half of `B`,
/// so the two are as far apart as equitable bipartitions get.
pub fn weak_mixture(n: usize, seed: u64) -> GraphCollection {
    let mut rng = seeded(seed);
    let first = random_equitable_bipartition(n, &mut rng);
    let pick = |part: &BitSet, k: usize, rng: &mut _| {
        let members = part.to_vec();
        index::sample(rng, members.len(), k).into_iter().map(|i| members[i]).collect::<Vec<_>>()
    };
    let from_a = first.a.len() / 2;
    let mut a = pick(&first.a, from_a, &mut rng);
    a.extend(pick(&first.b, n.div_ceil(2) - from_a, &mut rng));
    let second = Bipartition::from_part(BitSet::from_members(n, a));
    let mut graphs = vec![complete_bipartite_graph(&first); n / 2];
    graphs.extend(vec![complete_bipartite_graph(&second); n - n / 2]);
    GraphCollection::new(n, graphs).expect("non-empty")
}

fn planted(n: usize, seed: u64) -> Result<Vec<(&'static str, GraphCollection, StabilityStatus)>, HarnessError> {
    Ok(vec![
        ("complete", GraphCollection::uniform(Graph::complete(n), n).expect("non-empty"), StabilityStatus::StronglyStable),
        ("h-ec1", make_h(n, n, 0)?, StabilityStatus::NotStable),
        ("h-ec2", make_h(n, 0, n)?, StabilityStatus::NotStable),
        ("h-mixed", make_h(n, n / 2, n - n / 2)?, StabilityStatus::NotStable),
        ("half-split", make_half_split(n, n, BInternal::Empty)?, StabilityStatus::NotStable),
        ("weak-mixture", weak_mixture(n, seed), StabilityStatus::WeaklyStable),
    ])
}

/// Perturbs each planted collection by every edit count in `edit_grid` and
/// records classification and both distances against the planted label. The
/// aggregate `flip/<family>` is the first grid value whose classification
/// departs from the label.
pub fn run_stability_boundary(n: usize, edit_grid: &[usize], seed: u64) -> Result<ExperimentReport, HarnessError> {
    run_stability_boundary_with(n, edit_grid, seed, BoundaryParams::default())
}

pub fn run_stability_boundary_with(
    n: usize,
    edit_grid: &[usize],
    seed: u64,
    params: BoundaryParams,
) -> Result<ExperimentReport, HarnessError> {
    if n > BOUNDARY_MAX_N {
        return Err(HarnessError::TooLarge { n, max: BOUNDARY_MAX_N });
    }
    let families = planted(n, seed)?;
    let jobs: Vec<(usize, usize, u64)> = (0..families.len())
        .flat_map(|f| edit_grid.iter().enumerate().map(move |(row, &k)| (f, k, seed.wrapping_add((f * 1000 + row) as u64))))
        .collect();
    let instances = jobs
        .into_par_iter()
        .map(|(f, edits, row_seed)| {
            let (name, base, label) = &families[f];
            let g = perturb(base, edits, row_seed);
            let v = classify_stability(&g, params.gamma, params.alpha, params.eps, params.delta, NicenessMode::Exhaustive)?;
            let h = distance_to_h_family::<Rational>(&g, false, DistanceMethod::Exhaustive)?;
            let half = distance_to_half_split::<Rational>(&g, DistanceMethod::Exhaustive)?;
            let row = BoundaryRow {
                edits,
                planted: *label,
                status: v.status,
                nice_colors: v.nice_colors.len(),
                cross_edges: v.cross_edge_count,
                h_distance: h.cost,
                half_split_distance: half.cost,
            };
            Ok(InstanceRecord {
                id: format!("n{n:02}/{name}/edits{edits:04}"),
                n,
                family: (*name).to_owned(),
                seed: Some(row_seed),
                agrees: row.status == row.planted,
                outcome: InstanceOutcome::Boundary(row),
                note: None,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let flips: Vec<(String, usize)> = families
        .iter()
        .filter_map(|(name, _, _)| {
            instances
                .iter()
                .filter(|i| i.family == *name && !i.agrees)
                .filter_map(|i| match &i.outcome {
                    InstanceOutcome::Boundary(r) => Some(r.edits),
                    InstanceOutcome::Hamilton(_) => None,
                })
                .min()
                .map(|k| (format!("flip/{name}"), k))
        })
        .collect();
    let mut report = ExperimentReport::new(
        "stability_boundary",
        json!({
            "n": n,
            "edit_grid": edit_grid,
            "seed": seed,
            "gamma": params.gamma.to_string(),
            "alpha": params.alpha.to_string(),
            "eps": params.eps.to_string(),
            "delta": params.delta.to_string(),
        }),
        vec![seed],
        instances,
    );
    // departures from the planted label are data here, not disagreements
    report.aggregate.remove("disagreements");
    report.aggregate.extend(flips);
    Ok(report)
}

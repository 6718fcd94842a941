//! Counting disjoint absorbing segments of a cycle.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AbsorptionError;
use crate::bitset::ColorSet;
use crate::collection::GraphCollection;
use crate::scalar::Scalar;
use crate::structure::{NicenessMode, StructureAnalysis};
use crate::transversal::TransversalSubgraph;

const SEGMENT: usize = 4;

/// The largest number of pairwise disjoint windows of 4 consecutive
/// positions on a cycle of length `qualifying.len()`, using only windows
/// whose start is marked.
pub fn max_disjoint_segments(qualifying: &[bool]) -> usize {
    let t = qualifying.len();
    if t < SEGMENT {
        return 0;
    }
    // fix the first window, then the cycle becomes a line and the earliest
    // finishing window is always safe
    (0..t)
        .filter(|&s| qualifying[s])
        .map(|s| {
            let mut count = 1;
            let mut next = s + SEGMENT;
            while next + SEGMENT <= s + t {
                if qualifying[next % t] {
                    count += 1;
                    next += SEGMENT;
                } else {
                    next += 1;
                }
            }
            count
        })
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAbsorption {
    pub color: usize,
    pub good_vertices: usize,
    /// Over good `v`, the most anchors `u` lacking enough disjoint paths.
    pub worst_exceptional_u: usize,
    /// Good `v` lacking enough disjoint paths of `(v, v)`.
    pub exceptional_v: usize,
    /// Fewest disjoint paths over all good `v` and all `u`.
    pub min_disjoint: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsorbingCycleReport<T> {
    pub cycle_length: usize,
    pub delta_p: T,
    pub gamma_p: T,
    /// `gamma' n`, the number of disjoint paths each demand needs.
    pub required: T,
    /// `delta' n`, the number of exceptions tolerated.
    pub exceptional_limit: T,
    pub condition_i: bool,
    pub condition_ii: bool,
    pub colors: Vec<ColorAbsorption>,
}

impl<T> AbsorbingCycleReport<T> {
    pub fn holds(&self) -> bool {
        self.condition_i && self.condition_ii
    }
}

/// Checks both absorbing conditions for every colour of `colors`, judging
/// goodness at `eps`.
pub fn check_absorbing_cycle<T: Scalar>(
    g: &GraphCollection,
    cycle: &TransversalSubgraph,
    colors: &ColorSet,
    delta_p: T,
    eps: T,
    gamma_p: T,
    mode: NicenessMode,
) -> Result<AbsorbingCycleReport<T>, AbsorptionError> {
    let analysis = StructureAnalysis::new(g, eps, mode).map_err(AbsorptionError::Structure)?;
    check_absorbing_cycle_with(g, cycle, colors, &analysis, delta_p, gamma_p)
}

/// [`check_absorbing_cycle`] against a precomputed structure analysis.
pub fn check_absorbing_cycle_with<T: Scalar>(
    g: &GraphCollection,
    cycle: &TransversalSubgraph,
    colors: &ColorSet,
    analysis: &StructureAnalysis<T>,
    delta_p: T,
    gamma_p: T,
) -> Result<AbsorbingCycleReport<T>, AbsorptionError> {
    cycle.validate(g).map_err(AbsorptionError::InvalidInput)?;
    let (order, steps) = cycle.cycle_walk().ok_or(AbsorptionError::NotCycle)?;
    let n = g.n();
    let t = order.len();
    let required = gamma_p * T::from_usize(n);
    let exceptional_limit = delta_p * T::from_usize(n);
    let enough = |count: usize| T::from_usize(count) >= required;
    let at = |i: usize| order[i % t];

    let per_color: Vec<ColorAbsorption> = colors
        .iter()
        .filter(|&c| c < g.colors())
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|c| {
            let good: Vec<usize> = (0..n).filter(|&v| analysis.is_good(c, v)).collect();
            let mut worst_exceptional_u = 0;
            let mut exceptional_v = 0;
            let mut min_disjoint = usize::MAX;
            for &v in &good {
                // orientation 0 has v2 = w(i+1), orientation 1 has v2 = w(i+2)
                let to_v: Vec<[bool; 2]> =
                    (0..t).map(|i| [g.has_edge(c, at(i + 1), v), g.has_edge(c, at(i + 2), v)]).collect();
                let mut failures = 0;
                for u in 0..n {
                    let qualifying: Vec<bool> = (0..t)
                        .map(|i| {
                            let window = [at(i), at(i + 1), at(i + 2), at(i + 3)];
                            if window.contains(&v) || window.contains(&u) {
                                return false;
                            }
                            let mid = steps[(i + 1) % t];
                            (to_v[i][0] && g.has_edge(mid, at(i + 2), u)) || (to_v[i][1] && g.has_edge(mid, at(i + 1), u))
                        })
                        .collect();
                    let count = max_disjoint_segments(&qualifying);
                    min_disjoint = min_disjoint.min(count);
                    if !enough(count) {
                        failures += 1;
                        if u == v {
                            exceptional_v += 1;
                        }
                    }
                }
                worst_exceptional_u = worst_exceptional_u.max(failures);
            }
            ColorAbsorption {
                color: c,
                good_vertices: good.len(),
                worst_exceptional_u,
                exceptional_v,
                min_disjoint: if good.is_empty() { 0 } else { min_disjoint },
            }
        })
        .collect();
    let within = |count: usize| T::from_usize(count) <= exceptional_limit;
    Ok(AbsorbingCycleReport {
        cycle_length: t,
        delta_p,
        gamma_p,
        required,
        exceptional_limit,
        condition_i: per_color.iter().all(|a| within(a.worst_exceptional_u)),
        condition_ii: per_color.iter().all(|a| within(a.exceptional_v)),
        colors: per_color,
    })
}

//! Absorption: the randomized transversal matching on directed k-graphs,
//! absorbing paths, vertex and path insertion, absorbing-cycle checks and a
//! desk-scale absorbing-cycle construction.

mod cycle;
mod demo;
mod kgraph;
mod paths;

use thiserror::Error;

use crate::structure::StructureError;
use crate::transversal::InvalidReason;

pub use cycle::{
    check_absorbing_cycle, check_absorbing_cycle_with, max_disjoint_segments, AbsorbingCycleReport, ColorAbsorption,
};
pub use demo::{build_absorbing_cycle_demo, DemoFailure, DemoOutcome, DemoParams};
pub use kgraph::{
    check_hypotheses, random_transversal_matching, DirectedKGraphCollection, HypothesisReport, MatchedTuple,
    TransversalMatchingReport, MATCHING_ROUNDS,
};
pub use paths::{
    absorb_path, absorb_vertex, count_absorbing_paths, enumerate_absorbing_paths, AbsorbingPathRecord,
    EnumerationOptions, Forbidden, ENUMERATION_MAX_N,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbsorptionError {
    #[error("{0}")]
    Parameter(String),
    #[error("arity must be positive, found {0}")]
    Arity(usize),
    #[error("tuples over {n} vertices of arity {k} do not fit in 64-bit codes")]
    CodeOverflow { n: usize, k: usize },
    #[error("graph {graph}: bad tuple {tuple:?}: {reason}")]
    BadTuple { graph: usize, tuple: Vec<usize>, reason: String },
    #[error("{0}")]
    Mismatch(String),
    #[error("invalid absorbing path: {0}")]
    InvalidRecord(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("the record's path is not a segment of the cycle")]
    NotSegment,
    #[error("input is not a single cycle")]
    NotCycle,
    #[error("input is not a single path")]
    NotPath,
    #[error("invalid input subgraph: {0}")]
    InvalidInput(InvalidReason),
    #[error("insertion produced an invalid cycle: {0}")]
    InvalidOutput(InvalidReason),
    #[error(transparent)]
    Structure(StructureError),
}

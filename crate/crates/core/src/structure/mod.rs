//! Structural taxonomy of single graphs and of collections: niceness,
//! extremality, characteristic partitions, crossing pairs and stability.

mod niceness;
mod partition;
pub(crate) mod stability;

use thiserror::Error;

pub use niceness::{extremality, is_extremal, is_nice, NicenessMode, NicenessVerdict, NicenessWitness};
pub use partition::{
    characteristic_partition, check_invariants, extract_characteristic, CharacteristicPartition, ExtractionCase,
    Extraction, ExtremalKind,
};
pub use stability::{
    check_crossing_observation, classify_stability, cross_graph, is_collection_nice, is_good_vertex,
    CollectionNiceness, CollectionNicenessFailure, CollectionNicenessWitness, ColorStructure, StabilityStatus,
    StabilityVerdict, StructureAnalysis,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("{0}")]
    Parameter(String),
    #[error("n = {n} exceeds the limit {max} for this mode")]
    TooLarge { n: usize, max: usize },
    #[error("graph is not extremal at this eps")]
    NotExtremal,
    #[error("precondition failed: {0}")]
    Precondition(String),
}

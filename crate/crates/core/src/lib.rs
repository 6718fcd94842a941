//! Transversal (rainbow) Hamiltonicity for graph collections.
//!
//! A graph collection is a tuple of simple graphs `G_0, ..., G_{s-1}` on a
//! common vertex set `0..n`; graph `c` carries colour `c`. A transversal copy
//! of a graph `H` uses each of its edges from a different colour.
//!
//! The crate provides:
//! - the collection data model and JSON formats ([`collection`], [`format`]),
//! - generators for the extremal families ([`constructions`]),
//! - certificates and distances to the extremal families ([`closeness`]),
//! - exact transversal Hamilton cycle, path and matching search ([`solver`]),
//! - niceness, extremality and stability classification ([`structure`]),
//! - absorbing paths and cycles ([`absorption`]),
//! - reproducible experiments with JSON reports ([`harness`]).

pub mod absorption;
pub mod bitset;
pub mod closeness;
pub mod collection;
pub mod constructions;
pub mod format;
pub mod harness;
pub mod scalar;
pub mod solver;
pub mod structure;
pub mod transversal;

pub use bitset::{BitSet, ColorSet, VertexSet};
pub use collection::{CollectionError, Graph, GraphCollection};
pub use scalar::Scalar;
pub use transversal::{InvalidReason, SubgraphKind, TransversalEdge, TransversalSubgraph};

/// Exact rational parameters.
pub type Rational = num_rational::Ratio<i128>;

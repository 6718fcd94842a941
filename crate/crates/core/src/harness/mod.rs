//! Reproducible desk-scale experiments with persisted JSON reports.
//!
//! Every non-existence claim in a report names its backing: a completed
//! search, a verified certificate, or both. Instances are keyed by id and
//! sorted, and wall-clock time is only present when a caller sets it, so
//! identical seeds give byte-identical reports.

mod boundary;
mod sweep;

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::closeness::{verify_certificate, Certificate, DistanceError, HamiltonTarget};
use crate::collection::GraphCollection;
use crate::constructions::ConstructionError;
use crate::format::{collection_to_json, FORMAT_VERSION};
use crate::solver::{Backing, SearchOutcome, SearchStatus, SolverError};
use crate::structure::StructureError;
use crate::transversal::TransversalSubgraph;

pub use boundary::{run_stability_boundary, run_stability_boundary_with, weak_mixture, BoundaryParams, BoundaryRow, BOUNDARY_MAX_N};
pub use sweep::{run_dirac_sampling, run_extremal_sweep, HAMILTON_SWEEP_MAX_N};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("n = {n} exceeds the limit {max} for this experiment")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimStatus {
    Found,
    NotFound,
    /// The search ran out of budget.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimBacking {
    SolverExhausted,
    EmptyColor,
    ParityCertificate,
    IndependentSetCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonClaim {
    pub target: HamiltonTarget,
    pub status: ClaimStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<TransversalSubgraph>,
    /// Non-empty exactly when `status` is `not_found`.
    pub backing: Vec<ClaimBacking>,
    pub nodes: u64,
}

impl HamiltonClaim {
    /// Combines a search outcome with an optional certificate. A witness that
    /// fails validation is dropped and the claim left indeterminate.
    pub fn new(
        g: &GraphCollection,
        target: HamiltonTarget,
        outcome: &SearchOutcome,
        certificate: Option<&Certificate>,
    ) -> Self {
        let mut backing = Vec::new();
        let status = match outcome.status {
            SearchStatus::Found => match &outcome.witness {
                Some(w) if w.validate(g).is_ok() => ClaimStatus::Found,
                _ => ClaimStatus::Indeterminate,
            },
            SearchStatus::Exhausted => {
                backing.push(match outcome.backing {
                    Backing::Search => ClaimBacking::SolverExhausted,
                    Backing::EmptyColor => ClaimBacking::EmptyColor,
                    Backing::ParityCertificate => ClaimBacking::ParityCertificate,
                });
                ClaimStatus::NotFound
            }
            SearchStatus::BudgetExceeded => ClaimStatus::Indeterminate,
        };
        if let Some(cert) = certificate.filter(|c| c.target() == target && verify_certificate(g, c).is_ok()) {
            backing.push(match cert {
                Certificate::Parity(_) => ClaimBacking::ParityCertificate,
                Certificate::IndependentSet(_) => ClaimBacking::IndependentSetCertificate,
            });
        }
        backing.sort();
        backing.dedup();
        let status = if status == ClaimStatus::Indeterminate && !backing.is_empty() { ClaimStatus::NotFound } else { status };
        Self {
            target,
            witness: if status == ClaimStatus::Found { outcome.witness.clone() } else { None },
            status,
            backing: if status == ClaimStatus::Found { Vec::new() } else { backing },
            nodes: outcome.nodes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceOutcome {
    Hamilton(HamiltonClaim),
    Boundary(BoundaryRow),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub n: usize,
    pub family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub outcome: InstanceOutcome,
    /// The outcome matches the exact finite statement for this instance, or
    /// there is none.
    pub agrees: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// An instance persisted in full: a small-`n` exception to an asymptotic
/// statement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub instance: String,
    pub reason: String,
    pub collection: serde_json::Value,
}

impl Finding {
    pub fn new(instance: &str, reason: impl Into<String>, g: &GraphCollection) -> Self {
        Self {
            instance: instance.to_owned(),
            reason: reason.into(),
            collection: serde_json::from_str(&collection_to_json(g)).expect("collection JSON parses"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub version: u32,
    pub experiment: String,
    pub parameters: serde_json::Value,
    pub seeds: Vec<u64>,
    pub instances: Vec<InstanceRecord>,
    pub aggregate: BTreeMap<String, usize>,
    pub findings: Vec<Finding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
}

impl ExperimentReport {
    fn new(experiment: &str, parameters: serde_json::Value, seeds: Vec<u64>, mut instances: Vec<InstanceRecord>) -> Self {
        instances.sort_by(|a, b| a.id.cmp(&b.id));
        let mut aggregate = BTreeMap::new();
        aggregate.insert("instances".to_owned(), instances.len());
        aggregate.insert("disagreements".to_owned(), instances.iter().filter(|i| !i.agrees).count());
        for (key, status) in [
            ("found", ClaimStatus::Found),
            ("not_found", ClaimStatus::NotFound),
            ("indeterminate", ClaimStatus::Indeterminate),
        ] {
            let count = instances
                .iter()
                .filter(|i| matches!(&i.outcome, InstanceOutcome::Hamilton(c) if c.status == status))
                .count();
            aggregate.insert(key.to_owned(), count);
        }
        Self {
            version: FORMAT_VERSION,
            experiment: experiment.to_owned(),
            parameters,
            seeds,
            instances,
            aggregate,
            findings: Vec::new(),
            wall_clock_ms: None,
        }
    }

    pub fn disagreements(&self) -> usize {
        self.aggregate.get("disagreements").copied().unwrap_or(0)
    }

    pub fn instance(&self, id: &str) -> Option<&InstanceRecord> {
        self.instances.binary_search_by(|i| i.id.as_str().cmp(id)).ok().map(|x| &self.instances[x])
    }

    /// Every negative claim has backing and no found claim lacks a witness.
    pub fn audit(&self) -> Result<(), String> {
        for i in &self.instances {
            if let InstanceOutcome::Hamilton(c) = &i.outcome {
                match c.status {
                    ClaimStatus::NotFound if c.backing.is_empty() => {
                        return Err(format!("{}: negative claim without backing", i.id))
                    }
                    ClaimStatus::Found if c.witness.is_none() => return Err(format!("{}: found claim without witness", i.id)),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Self, crate::format::FormatError> {
        let report: Self = serde_json::from_str(text)?;
        crate::format::check_version(report.version)?;
        Ok(report)
    }

    /// Writes `<dir>/<experiment>.json`, creating `dir` if needed.
    pub fn write_to(&self, dir: &Path) -> io::Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.json", self.experiment));
        fs::write(&path, self.to_json())?;
        Ok(path)
    }
}

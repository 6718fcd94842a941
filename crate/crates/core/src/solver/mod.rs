//! Exact search for transversal Hamilton cycles, paths and maximum
//! transversal matchings, plus an independent brute-force oracle.
//!
//! The cycle and path searches keep vertex and colour sets in single words,
//! so they handle `n <= 64`.

mod cycle;
mod matching;
mod oracle;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::collection::{Graph, GraphCollection};
use crate::transversal::TransversalSubgraph;

pub use matching::{max_transversal_matching, max_transversal_matching_with_budget, MatchingOutcome};
pub use oracle::{brute_force_oracle, ORACLE_MAX_N};

/// Largest `n` handled by the word-parallel searches.
pub const SOLVER_MAX_N: usize = 64;

/// Limits for one solve call. Absent limits mean unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub node_limit: Option<u64>,
    pub time_limit_ms: Option<u64>,
    /// Single-threaded canonical order, so witnesses are reproducible.
    pub deterministic: bool,
    /// Try a parity certificate before searching.
    pub parity_precheck: bool,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            node_limit: None,
            time_limit_ms: None,
            deterministic: true,
            parity_precheck: true,
        }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn with_node_limit(mut self, nodes: u64) -> Self {
        self.node_limit = Some(nodes);
        self
    }

    pub fn with_time_limit_ms(mut self, ms: u64) -> Self {
        self.time_limit_ms = Some(ms);
        self
    }

    pub fn parallel(mut self) -> Self {
        self.deterministic = false;
        self
    }

    pub fn without_precheck(mut self) -> Self {
        self.parity_precheck = false;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Found,
    Exhausted,
    BudgetExceeded,
}

/// What a verdict rests on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backing {
    /// The search tree was explored completely (or a witness was found).
    Search,
    /// A verified parity certificate ruled the target out before searching.
    ParityCertificate,
    /// Some colour has no edge at all.
    EmptyColor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<TransversalSubgraph>,
    pub nodes: u64,
    pub backing: Backing,
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        self.status == SearchStatus::Found
    }

    fn exhausted(backing: Backing, nodes: u64) -> Self {
        Self { status: SearchStatus::Exhausted, witness: None, nodes, backing }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("expected {expected} colours for n = {n}, found {found}")]
    ColorCount { n: usize, expected: usize, found: usize },
    #[error("n = {0} is too small for this search")]
    TooSmall(usize),
    #[error("n = {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },
}

fn check_shape(g: &GraphCollection, expected_colors: usize, min_n: usize, max_n: usize) -> Result<(), SolverError> {
    let n = g.n();
    if n < min_n {
        return Err(SolverError::TooSmall(n));
    }
    if n > max_n {
        return Err(SolverError::TooLarge { n, max: max_n });
    }
    if g.colors() != expected_colors {
        return Err(SolverError::ColorCount { n, expected: expected_colors, found: g.colors() });
    }
    Ok(())
}

/// Searches for a transversal Hamilton cycle; needs `colors = n`, `3 <= n <= 64`.
pub fn find_transversal_hamilton_cycle(g: &GraphCollection, budget: &SearchBudget) -> Result<SearchOutcome, SolverError> {
    check_shape(g, g.n(), 3, SOLVER_MAX_N)?;
    if budget.parity_precheck {
        if let Ok(Some(_)) = crate::closeness::parity_certificate(g, None) {
            return Ok(SearchOutcome::exhausted(Backing::ParityCertificate, 0));
        }
    }
    let outcome = cycle::search(g, budget);
    if let Some(w) = &outcome.witness {
        debug_assert!(w.is_valid(g), "solver produced an invalid witness");
    }
    Ok(outcome)
}

/// Searches for a transversal Hamilton path; needs `colors = n - 1`.
///
/// A complete graph is appended as colour `n - 1`, the cycle search runs on
/// the result and the complete-colour edge is removed from the witness.
pub fn find_transversal_hamilton_path(g: &GraphCollection, budget: &SearchBudget) -> Result<SearchOutcome, SolverError> {
    let n = g.n();
    check_shape(g, n.saturating_sub(1), 2, SOLVER_MAX_N)?;
    if n == 2 {
        let witness = g
            .has_edge(0, 0, 1)
            .then(|| TransversalSubgraph::path_from_order(&[0, 1], &[0]));
        let status = if witness.is_some() { SearchStatus::Found } else { SearchStatus::Exhausted };
        return Ok(SearchOutcome { status, witness, nodes: 1, backing: Backing::Search });
    }
    let extended = g.with_extra_color(Graph::complete(n)).expect("same vertex set");
    let mut outcome = find_transversal_hamilton_cycle(&extended, budget)?;
    if let Some(cycle) = outcome.witness.take() {
        let (order, colors) = cycle.cycle_walk().expect("valid cycle");
        let cut = colors.iter().position(|&c| c == n - 1).expect("every colour is used");
        // rotate so the complete-colour edge is the closing one
        let rotated: Vec<usize> = (0..n).map(|i| order[(cut + 1 + i) % n]).collect();
        let path_colors: Vec<usize> = (0..n - 1).map(|i| colors[(cut + 1 + i) % n]).collect();
        let path = TransversalSubgraph::path_from_order(&rotated, &path_colors);
        debug_assert!(path.is_valid(g));
        outcome.witness = Some(path);
    }
    Ok(outcome)
}

//! Brute-force decision by enumerating every vertex order.
//!
//! Shares no code with the search: each order is tested by an ordinary
//! bipartite matching between its edge positions and the colours.

use super::SolverError;
use crate::closeness::HamiltonTarget;
use crate::collection::GraphCollection;

pub const ORACLE_MAX_N: usize = 9;

/// True iff a transversal Hamilton cycle (`colors = n`) or path
/// (`colors = n - 1`) exists. Needs `n <= 9`.
pub fn brute_force_oracle(g: &GraphCollection, target: HamiltonTarget) -> Result<bool, SolverError> {
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(SolverError::TooLarge { n, max: ORACLE_MAX_N });
    }
    let (positions, min_n) = match target {
        HamiltonTarget::Cycle => (n, 3),
        HamiltonTarget::Path => (n.saturating_sub(1), 2),
    };
    if n < min_n {
        return Err(SolverError::TooSmall(n));
    }
    if g.colors() != positions {
        return Err(SolverError::ColorCount { n, expected: positions, found: g.colors() });
    }
    let mut order: Vec<usize> = (0..n).collect();
    Ok(permutations_any(&mut order, 0, &mut |o| colorable(g, o, positions)))
}

fn permutations_any(order: &mut Vec<usize>, k: usize, test: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == order.len() {
        return test(order);
    }
    for i in k..order.len() {
        order.swap(k, i);
        let hit = permutations_any(order, k + 1, test);
        order.swap(k, i);
        if hit {
            return true;
        }
    }
    false
}

fn colorable(g: &GraphCollection, order: &[usize], positions: usize) -> bool {
    let n = order.len();
    let allowed: Vec<Vec<bool>> = (0..positions)
        .map(|p| {
            let (u, v) = (order[p], order[(p + 1) % n]);
            (0..g.colors()).map(|c| g.has_edge(c, u, v)).collect()
        })
        .collect();
    if allowed.iter().any(|row| !row.contains(&true)) {
        return false;
    }
    let mut color_owner: Vec<Option<usize>> = vec![None; g.colors()];
    (0..positions).all(|p| {
        let mut seen = vec![false; g.colors()];
        kuhn(p, &allowed, &mut color_owner, &mut seen)
    })
}

fn kuhn(p: usize, allowed: &[Vec<bool>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for c in 0..owner.len() {
        if allowed[p][c] && !seen[c] {
            seen[c] = true;
            if owner[c].map_or(true, |q| kuhn(q, allowed, owner, seen)) {
                owner[c] = Some(p);
                return true;
            }
        }
    }
    false
}

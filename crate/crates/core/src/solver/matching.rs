//! Maximum transversal matchings.
//!
//! A greedy matching is grown with two local moves until neither applies:
//! adding an edge of an unused colour between unmatched vertices, and
//! replacing a matched edge `ww+` by `v1 w` and `w+ v2` in two unused colours.
//! Branch and bound over vertices then closes the gap to a proven optimum.
//! As in the cycle search, the branching fixes edges only and a bipartite
//! matching from edges to colours decides whether they can be coloured.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::SearchBudget;
use crate::bitset::{low_mask, BitIter};
use crate::collection::GraphCollection;
use crate::transversal::{SubgraphKind, TransversalEdge, TransversalSubgraph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingOutcome {
    pub matching: TransversalSubgraph,
    /// The branch and bound finished, so no larger matching exists.
    pub optimal: bool,
    pub nodes: u64,
}

/// A maximum transversal matching. Exact for `n <= 64` and at most 64
/// colours; larger inputs get the locally improved greedy matching.
pub fn max_transversal_matching(g: &GraphCollection) -> TransversalSubgraph {
    max_transversal_matching_with_budget(g, &SearchBudget::default()).matching
}

pub fn max_transversal_matching_with_budget(g: &GraphCollection, budget: &SearchBudget) -> MatchingOutcome {
    let mut edges = greedy(g);
    improve(g, &mut edges);
    if g.n() > 64 || g.colors() > 64 {
        return MatchingOutcome { matching: to_subgraph(edges), optimal: false, nodes: 0 };
    }
    let mut bb = BranchAndBound::new(g, budget, edges.len());
    bb.run();
    let optimal = !bb.aborted;
    let best = bb.best.take().unwrap_or(edges);
    MatchingOutcome { matching: to_subgraph(best), optimal, nodes: bb.nodes }
}

fn to_subgraph(mut edges: Vec<TransversalEdge>) -> TransversalSubgraph {
    edges.sort_by_key(|e| (e.u.min(e.v), e.u.max(e.v)));
    TransversalSubgraph::new(SubgraphKind::Matching, edges)
}

fn greedy(g: &GraphCollection) -> Vec<TransversalEdge> {
    let mut used = vec![false; g.n()];
    let mut out = Vec::new();
    for (c, graph) in g.graphs().iter().enumerate() {
        if let Some((u, v)) = graph.edges().find(|&(u, v)| !used[u] && !used[v]) {
            used[u] = true;
            used[v] = true;
            out.push(TransversalEdge::new(u, v, c));
        }
    }
    out
}

/// Applies the two augmenting moves until neither applies.
pub(crate) fn improve(g: &GraphCollection, m: &mut Vec<TransversalEdge>) {
    loop {
        let mut matched = vec![false; g.n()];
        let mut used = vec![false; g.colors()];
        for e in m.iter() {
            matched[e.u] = true;
            matched[e.v] = true;
            used[e.color] = true;
        }
        let free: Vec<usize> = (0..g.n()).filter(|&v| !matched[v]).collect();
        let unused: Vec<usize> = (0..g.colors()).filter(|&c| !used[c]).collect();

        let direct = unused.iter().find_map(|&c| {
            free.iter()
                .flat_map(|&u| free.iter().map(move |&v| (u, v)))
                .find(|&(u, v)| u < v && g.has_edge(c, u, v))
                .map(|(u, v)| TransversalEdge::new(u, v, c))
        });
        if let Some(e) = direct {
            m.push(e);
            continue;
        }

        let mut swap = None;
        'outer: for (i, e) in m.iter().enumerate() {
            for (w, w_plus) in [(e.u, e.v), (e.v, e.u)] {
                for &c1 in &unused {
                    for &v1 in free.iter().filter(|&&v1| g.has_edge(c1, v1, w)) {
                        for &c2 in unused.iter().filter(|&&c2| c2 != c1) {
                            if let Some(&v2) = free.iter().find(|&&v2| v2 != v1 && g.has_edge(c2, v2, w_plus)) {
                                swap = Some((i, TransversalEdge::new(v1, w, c1), TransversalEdge::new(w_plus, v2, c2)));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        match swap {
            Some((i, a, b)) => {
                m.swap_remove(i);
                m.push(a);
                m.push(b);
            }
            None => return,
        }
    }
}

struct BranchAndBound<'a> {
    g: &'a GraphCollection,
    n: usize,
    colors: usize,
    adj: Vec<u64>,
    pair: Vec<u64>,
    edges: Vec<(usize, usize, u64)>,
    owner: Vec<Option<usize>>,
    best_len: usize,
    best: Option<Vec<TransversalEdge>>,
    nodes: u64,
    node_limit: Option<u64>,
    deadline: Option<Instant>,
    aborted: bool,
}

impl<'a> BranchAndBound<'a> {
    fn new(g: &'a GraphCollection, budget: &SearchBudget, seed_len: usize) -> Self {
        let n = g.n();
        let mut pair = vec![0u64; n * n];
        let mut adj = vec![0u64; n];
        for (c, graph) in g.graphs().iter().enumerate() {
            for (u, v) in graph.edges() {
                pair[u * n + v] |= 1 << c;
                pair[v * n + u] |= 1 << c;
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
        Self {
            g,
            n,
            colors: g.colors(),
            adj,
            pair,
            edges: Vec::new(),
            owner: vec![None; g.colors()],
            best_len: seed_len,
            best: None,
            nodes: 0,
            node_limit: budget.node_limit,
            deadline: budget.time_limit_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
            aborted: false,
        }
    }

    fn augment(&mut self, e: usize, seen: &mut u64) -> bool {
        let cand = self.edges[e].2 & !*seen;
        for c in BitIter(cand) {
            if self.owner[c].is_none() {
                self.owner[c] = Some(e);
                return true;
            }
        }
        for c in BitIter(cand) {
            if *seen & 1 << c != 0 {
                continue;
            }
            *seen |= 1 << c;
            let holder = self.owner[c].expect("assigned");
            if self.augment(holder, seen) {
                self.owner[c] = Some(e);
                return true;
            }
        }
        false
    }

    fn run(&mut self) {
        let active = low_mask(self.n);
        self.dfs(active);
    }

    fn out_of_budget(&mut self) -> bool {
        self.nodes += 1;
        let over = self.node_limit.is_some_and(|l| self.nodes > l)
            || (self.nodes % 256 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d));
        if over {
            self.aborted = true;
        }
        over
    }

    /// `active` holds unmatched vertices that may still be matched.
    fn dfs(&mut self, mut active: u64) {
        if self.aborted || self.out_of_budget() {
            return;
        }
        for v in BitIter(active) {
            if self.adj[v] & active & !(1 << v) == 0 {
                active &= !(1 << v);
            }
        }
        let size = self.edges.len();
        if size > self.best_len {
            self.record();
        }
        let bound = size + (active.count_ones() as usize / 2).min(self.colors - size);
        if bound <= self.best_len {
            return;
        }
        let v = active.trailing_zeros() as usize;
        let rest = active & !(1 << v);
        for w in BitIter(self.adj[v] & rest) {
            let saved = self.owner.clone();
            self.edges.push((v, w, self.pair[v * self.n + w]));
            if self.augment(self.edges.len() - 1, &mut 0) {
                self.dfs(rest & !(1 << w));
            }
            self.edges.pop();
            self.owner = saved;
            if self.aborted {
                return;
            }
        }
        self.dfs(rest);
    }

    fn record(&mut self) {
        let mut color_of = vec![usize::MAX; self.edges.len()];
        for (c, o) in self.owner.iter().enumerate() {
            if let Some(e) = o {
                color_of[*e] = c;
            }
        }
        let found: Vec<TransversalEdge> = self
            .edges
            .iter()
            .zip(&color_of)
            .map(|(&(u, v, _), &c)| TransversalEdge::new(u, v, c))
            .collect();
        debug_assert!(found.iter().all(|e| self.g.has_edge(e.color, e.u, e.v)));
        self.best_len = found.len();
        self.best = Some(found);
    }
}

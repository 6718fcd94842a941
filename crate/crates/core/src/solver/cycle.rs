//! Two-ended path extension from vertex 0 with colour feasibility pruning.
//!
//! Edges are placed without committing to colours. Instead the search keeps
//! a matching from the placed edges, plus one slot per edge still to come,
//! into the colours: placed edge `e` may take any colour of `L(e)` and a
//! future slot any colour with an edge inside the vertices that can still
//! carry future edges. A node survives only while this matching saturates
//! every edge and slot. Each extension changes one constraint, so the
//! parent's matching is repaired by a few augmenting paths.
//!
//! The cycle is anchored at vertex 0 and oriented so that its neighbour on
//! the right is smaller than its neighbour on the left.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{Backing, SearchBudget, SearchOutcome, SearchStatus};
use crate::bitset::{low_mask, BitIter};
use crate::collection::GraphCollection;
use crate::transversal::TransversalSubgraph;

const FREE: u8 = u8::MAX;
const FUTURE: u8 = u8::MAX - 1;

struct Instance {
    n: usize,
    /// `pair[u * n + v]` is `L(uv)` as a colour mask.
    pair: Vec<u64>,
    /// Union adjacency.
    adj: Vec<u64>,
    /// `rows[c][v]` is the `G_c`-neighbourhood of `v`.
    rows: Vec<Vec<u64>>,
}

impl Instance {
    fn new(g: &GraphCollection) -> Self {
        let n = g.n();
        let rows: Vec<Vec<u64>> = g.graphs().iter().map(|gr| (0..n).map(|v| gr.row_mask(v)).collect()).collect();
        let mut pair = vec![0u64; n * n];
        let mut adj = vec![0u64; n];
        for (c, r) in rows.iter().enumerate() {
            for u in 0..n {
                adj[u] |= r[u];
                for v in BitIter(r[u]) {
                    pair[u * n + v] |= 1 << c;
                }
            }
        }
        Self { n, pair, adj, rows }
    }

    fn colors_within(&self, w: u64) -> u64 {
        let mut out = 0;
        for (c, r) in self.rows.iter().enumerate() {
            if BitIter(w).any(|v| r[v] & w != 0) {
                out |= 1 << c;
            }
        }
        out
    }
}

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
    exceeded: AtomicBool,
    limit: Option<u64>,
    deadline: Option<Instant>,
    found: Mutex<Option<TransversalSubgraph>>,
}

impl Shared {
    fn tick(&self) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return false;
        }
        let k = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over_nodes = self.limit.is_some_and(|l| k > l);
        let over_time = k % 256 == 0 && self.deadline.is_some_and(|d| Instant::now() >= d);
        if over_nodes || over_time {
            self.exceeded.store(true, Ordering::Relaxed);
            self.stop.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Found,
    Exhausted,
    Aborted,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Left,
    Right,
}

struct Searcher<'a> {
    inst: &'a Instance,
    shared: &'a Shared,
    all: u64,
    /// Outward from vertex 0: `l1, l2, ...` and `r1, r2, ...`.
    left: Vec<usize>,
    right: Vec<usize>,
    visited: u64,
    fixed: Vec<(usize, usize, u64)>,
    owner: [u8; 64],
    assigned: u64,
    future: u64,
    future_mask: u64,
}

impl<'a> Searcher<'a> {
    fn new(inst: &'a Instance, shared: &'a Shared, initial_future: u64) -> Self {
        let mut owner = [FREE; 64];
        for c in BitIter(initial_future) {
            owner[c] = FUTURE;
        }
        Self {
            inst,
            shared,
            all: low_mask(inst.n),
            left: Vec::new(),
            right: Vec::new(),
            visited: 1,
            fixed: Vec::new(),
            owner,
            assigned: initial_future,
            future: initial_future,
            future_mask: initial_future,
        }
    }

    fn left_end(&self) -> usize {
        self.left.last().copied().unwrap_or(0)
    }

    fn right_end(&self) -> usize {
        self.right.last().copied().unwrap_or(0)
    }

    fn set(&mut self, c: usize, who: u8) {
        let bit = 1u64 << c;
        if self.owner[c] == FUTURE {
            self.future &= !bit;
        }
        self.owner[c] = who;
        self.assigned |= bit;
        if who == FUTURE {
            self.future |= bit;
        }
    }

    fn release(&mut self, c: usize) {
        let bit = 1u64 << c;
        self.owner[c] = FREE;
        self.assigned &= !bit;
        self.future &= !bit;
    }

    fn augment(&mut self, who: u8, seen: &mut u64) -> bool {
        let allowed = if who == FUTURE { self.future_mask } else { self.fixed[who as usize].2 };
        let cand = allowed & !*seen;
        let free = cand & !self.assigned;
        if free != 0 {
            self.set(free.trailing_zeros() as usize, who);
            return true;
        }
        for c in BitIter(cand) {
            let bit = 1u64 << c;
            if *seen & bit != 0 {
                continue;
            }
            *seen |= bit;
            let holder = self.owner[c];
            if self.augment(holder, seen) {
                self.set(c, who);
                return true;
            }
        }
        false
    }

    /// Places edge `end - w`; false when colours can no longer be matched.
    fn extend(&mut self, end: End, w: usize) -> bool {
        let x = match end {
            End::Left => self.left_end(),
            End::Right => self.right_end(),
        };
        let n = self.inst.n;
        self.fixed.push((x, w, self.inst.pair[x * n + w]));
        match end {
            End::Left => self.left.push(w),
            End::Right => self.right.push(w),
        }
        self.visited |= 1 << w;
        let unvisited = self.all & !self.visited;
        let (l, r) = (self.left_end(), self.right_end());
        self.future_mask = if unvisited == 0 {
            self.inst.pair[l * n + r]
        } else {
            self.inst.colors_within(unvisited | 1 << l | 1 << r)
        };
        for c in BitIter(self.future & !self.future_mask) {
            self.release(c);
        }
        let slots = (n - self.fixed.len()) as u32;
        while self.future.count_ones() > slots {
            self.release(self.future.trailing_zeros() as usize);
        }
        let id = (self.fixed.len() - 1) as u8;
        if !self.augment(id, &mut 0) {
            return false;
        }
        while self.future.count_ones() < slots {
            if !self.augment(FUTURE, &mut 0) {
                return false;
            }
        }
        true
    }

    fn retract(&mut self, end: End, saved: &([u8; 64], u64, u64, u64)) {
        let w = match end {
            End::Left => self.left.pop(),
            End::Right => self.right.pop(),
        }
        .expect("extended before");
        self.fixed.pop();
        self.visited &= !(1 << w);
        (self.owner, self.assigned, self.future, self.future_mask) = *saved;
    }

    fn snapshot(&self) -> ([u8; 64], u64, u64, u64) {
        (self.owner, self.assigned, self.future, self.future_mask)
    }

    fn try_extend(&mut self, end: End, w: usize) -> Step {
        let saved = self.snapshot();
        let step = if self.extend(end, w) { self.dfs() } else { Step::Exhausted };
        self.retract(end, &saved);
        step
    }

    fn above(v: usize) -> u64 {
        !low_mask(v + 1)
    }

    fn dfs(&mut self) -> Step {
        if !self.shared.tick() {
            return Step::Aborted;
        }
        let inst = self.inst;
        let unvisited = self.all & !self.visited;
        let (l, r) = (self.left_end(), self.right_end());
        let r1 = self.right[0];
        if unvisited == 0 {
            if self.left.is_empty() && r < r1 {
                return Step::Exhausted;
            }
            self.record();
            return Step::Found;
        }
        let w_set = unvisited | 1 << l | 1 << r;
        for u in BitIter(unvisited) {
            if (inst.adj[u] & w_set & !(1 << u)).count_ones() < 2 {
                return Step::Exhausted;
            }
        }
        if self.left.is_empty() && inst.adj[0] & unvisited & Self::above(r1) == 0 {
            return Step::Exhausted;
        }
        let mut reach = 1u64 << r;
        let mut frontier = reach;
        while frontier != 0 {
            let mut next = 0;
            for v in BitIter(frontier) {
                next |= inst.adj[v];
            }
            next &= w_set & !reach;
            reach |= next;
            frontier = next;
        }
        if reach != w_set {
            return Step::Exhausted;
        }

        let cand_r = inst.adj[r] & unvisited;
        let mut cand_l = inst.adj[l] & unvisited;
        if self.left.is_empty() {
            cand_l &= Self::above(r1);
        }
        if cand_r == 0 || cand_l == 0 {
            return Step::Exhausted;
        }
        let weight = |x: usize, cands: u64| -> u32 {
            BitIter(cands).map(|w| inst.pair[x * inst.n + w].count_ones()).sum()
        };
        let (end, cands) = if weight(l, cand_l) < weight(r, cand_r) {
            (End::Left, cand_l)
        } else {
            (End::Right, cand_r)
        };
        for w in BitIter(cands) {
            match self.try_extend(end, w) {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }

    fn record(&self) {
        let mut order = vec![0];
        order.extend(&self.right);
        order.extend(self.left.iter().rev());
        let n = self.inst.n;
        let color_of = |u: usize, v: usize| -> usize {
            match self.fixed.iter().position(|&(a, b, _)| (a, b) == (u, v) || (a, b) == (v, u)) {
                Some(i) => self.owner.iter().position(|&o| o == i as u8).expect("matched edge"),
                None => self.future.trailing_zeros() as usize,
            }
        };
        let colors: Vec<usize> = (0..n).map(|i| color_of(order[i], order[(i + 1) % n])).collect();
        let witness = TransversalSubgraph::cycle_from_order(&order, &colors);
        let mut slot = self.shared.found.lock().expect("witness lock");
        if slot.is_none() {
            *slot = Some(witness);
        }
        self.shared.stop.store(true, Ordering::Relaxed);
    }

    fn root_branch(&mut self, r1: usize) -> Step {
        self.try_extend(End::Right, r1)
    }
}

pub(super) fn search(g: &GraphCollection, budget: &SearchBudget) -> SearchOutcome {
    let inst = Instance::new(g);
    let n = inst.n;
    let initial_future = inst.colors_within(low_mask(n));
    if initial_future.count_ones() < n as u32 {
        return SearchOutcome::exhausted(Backing::EmptyColor, 0);
    }
    if inst.adj[0].count_ones() < 2 {
        return SearchOutcome::exhausted(Backing::Search, 0);
    }
    let shared = Shared {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        exceeded: AtomicBool::new(false),
        limit: budget.node_limit,
        deadline: budget.time_limit_ms.map(|ms| Instant::now() + Duration::from_millis(ms)),
        found: Mutex::new(None),
    };
    // the left neighbour of 0 must exceed r1
    let top = 63 - inst.adj[0].leading_zeros() as usize;
    let firsts: Vec<usize> = BitIter(inst.adj[0]).filter(|&r1| r1 < top).collect();
    if budget.deterministic {
        let mut s = Searcher::new(&inst, &shared, initial_future);
        for &r1 in &firsts {
            if s.root_branch(r1) != Step::Exhausted {
                break;
            }
        }
    } else {
        firsts.par_iter().for_each(|&r1| {
            if shared.stop.load(Ordering::Relaxed) {
                return;
            }
            Searcher::new(&inst, &shared, initial_future).root_branch(r1);
        });
    }
    let nodes = shared.nodes.load(Ordering::Relaxed);
    let witness = shared.found.into_inner().expect("witness lock");
    let status = if witness.is_some() {
        SearchStatus::Found
    } else if shared.exceeded.load(Ordering::Relaxed) {
        SearchStatus::BudgetExceeded
    } else {
        SearchStatus::Exhausted
    };
    SearchOutcome { status, witness, nodes, backing: Backing::Search }
}

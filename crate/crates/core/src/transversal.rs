//! Rainbow subgraphs: edge lists with pairwise distinct colours.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::{BitSet, ColorSet, VertexSet};
use crate::collection::GraphCollection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransversalEdge {
    pub u: usize,
    pub v: usize,
    pub color: usize,
}

impl TransversalEdge {
    pub fn new(u: usize, v: usize, color: usize) -> Self {
        Self { u, v, color }
    }

    fn key(&self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

impl Serialize for TransversalEdge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.u, self.v, self.color].serialize(s)
    }
}

impl<'de> Deserialize<'de> for TransversalEdge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [u, v, color] = <[usize; 3]>::deserialize(d)?;
        Ok(Self { u, v, color })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgraphKind {
    Cycle,
    Path,
    Matching,
    Generic,
}

/// Why a subgraph failed validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidReason {
    #[error("colour {0} is used more than once")]
    RepeatedColor(usize),
    #[error("edge {0:?} is a loop")]
    Loop(TransversalEdge),
    #[error("edge {0:?} references a vertex or colour outside the collection")]
    OutOfRange(TransversalEdge),
    #[error("edge {0:?} is absent from its colour's graph")]
    MissingEdge(TransversalEdge),
    #[error("vertex pair ({0},{1}) appears twice")]
    RepeatedPair(usize, usize),
    #[error("edges do not form a single cycle")]
    NotCycle,
    #[error("edges do not form a single path")]
    NotPath,
    #[error("edges share vertex {0}")]
    NotMatching(usize),
}

/// A list of coloured edges plus the shape they are claimed to form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransversalSubgraph {
    pub kind: SubgraphKind,
    pub edges: Vec<TransversalEdge>,
}

impl TransversalSubgraph {
    pub fn new(kind: SubgraphKind, edges: Vec<TransversalEdge>) -> Self {
        Self { kind, edges }
    }

    /// A cycle through `order` (closing back to the first vertex) using
    /// `colors[i]` on the edge `order[i] -> order[i+1]`.
    pub fn cycle_from_order(order: &[usize], colors: &[usize]) -> Self {
        assert_eq!(order.len(), colors.len());
        let edges = (0..order.len())
            .map(|i| TransversalEdge::new(order[i], order[(i + 1) % order.len()], colors[i]))
            .collect();
        Self::new(SubgraphKind::Cycle, edges)
    }

    /// A path through `order` using `colors[i]` on `order[i] -> order[i+1]`.
    pub fn path_from_order(order: &[usize], colors: &[usize]) -> Self {
        assert_eq!(order.len(), colors.len() + 1);
        let edges = order
            .windows(2)
            .zip(colors)
            .map(|(w, &c)| TransversalEdge::new(w[0], w[1], c))
            .collect();
        Self::new(SubgraphKind::Path, edges)
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|e| [e.u, e.v]).collect()
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        BitSet::from_members(n, self.vertices())
    }

    pub fn colors(&self) -> BTreeSet<usize> {
        self.edges.iter().map(|e| e.color).collect()
    }

    pub fn color_set(&self, colors: usize) -> ColorSet {
        BitSet::from_members(colors, self.colors())
    }

    /// For a cycle, the vertex order starting at the smallest vertex together
    /// with the colour of each step; `None` when the edges are not one cycle.
    pub fn cycle_walk(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        if self.edges.len() < 3 {
            return None;
        }
        let adj = self.adjacency()?;
        if adj.values().any(|nb| nb.len() != 2) {
            return None;
        }
        let start = *adj.keys().next()?;
        let mut order = vec![start];
        let mut colors = Vec::new();
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            let &(next, color) = adj[&cur].iter().find(|(w, _)| *w != prev)?;
            colors.push(color);
            if next == start {
                break;
            }
            order.push(next);
            if order.len() > self.edges.len() {
                return None;
            }
            prev = cur;
            cur = next;
        }
        (order.len() == self.edges.len()).then_some((order, colors))
    }

    /// For a path, the vertex order from the smaller endpoint and step colours.
    pub fn path_walk(&self) -> Option<(Vec<usize>, Vec<usize>)> {
        if self.edges.is_empty() {
            return None;
        }
        let adj = self.adjacency()?;
        if adj.values().any(|nb| nb.len() > 2) {
            return None;
        }
        let ends: Vec<usize> = adj.iter().filter(|(_, nb)| nb.len() == 1).map(|(&v, _)| v).collect();
        if ends.len() != 2 {
            return None;
        }
        let mut order = vec![ends[0]];
        let mut colors = Vec::new();
        let (mut prev, mut cur) = (usize::MAX, ends[0]);
        while let Some(&(next, color)) = adj[&cur].iter().find(|(w, _)| *w != prev) {
            order.push(next);
            colors.push(color);
            prev = cur;
            cur = next;
            if order.len() > adj.len() {
                return None;
            }
        }
        (order.len() == adj.len() && colors.len() == self.edges.len()).then_some((order, colors))
    }

    fn adjacency(&self) -> Option<BTreeMap<usize, Vec<(usize, usize)>>> {
        let mut adj: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        let mut pairs = BTreeSet::new();
        for e in &self.edges {
            if e.u == e.v || !pairs.insert(e.key()) {
                return None;
            }
            adj.entry(e.u).or_default().push((e.v, e.color));
            adj.entry(e.v).or_default().push((e.u, e.color));
        }
        Some(adj)
    }

    /// Checks rainbow-ness, membership of every edge in its colour's graph,
    /// and the shape constraint of `kind`.
    pub fn validate(&self, g: &GraphCollection) -> Result<(), InvalidReason> {
        let mut seen_colors = BTreeSet::new();
        let mut seen_pairs = BTreeSet::new();
        for &e in &self.edges {
            if e.u == e.v {
                return Err(InvalidReason::Loop(e));
            }
            if e.u >= g.n() || e.v >= g.n() || e.color >= g.colors() {
                return Err(InvalidReason::OutOfRange(e));
            }
            if !g.has_edge(e.color, e.u, e.v) {
                return Err(InvalidReason::MissingEdge(e));
            }
            if !seen_colors.insert(e.color) {
                return Err(InvalidReason::RepeatedColor(e.color));
            }
            if !seen_pairs.insert(e.key()) {
                return Err(InvalidReason::RepeatedPair(e.key().0, e.key().1));
            }
        }
        match self.kind {
            SubgraphKind::Generic => Ok(()),
            SubgraphKind::Cycle => self.cycle_walk().map(|_| ()).ok_or(InvalidReason::NotCycle),
            SubgraphKind::Path => self.path_walk().map(|_| ()).ok_or(InvalidReason::NotPath),
            SubgraphKind::Matching => {
                let mut used = BTreeSet::new();
                for e in &self.edges {
                    for x in [e.u, e.v] {
                        if !used.insert(x) {
                            return Err(InvalidReason::NotMatching(x));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_valid(&self, g: &GraphCollection) -> bool {
        self.validate(g).is_ok()
    }
}

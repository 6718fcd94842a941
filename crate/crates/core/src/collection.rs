//! Graph collections on a common vertex set.
//!
//! Each colour carries one simple graph whose adjacency is stored as `n` rows
//! of `ceil(n/64)` words. A [`GraphCollection`] is immutable once built; every
//! generator or perturbation produces a fresh value.

use thiserror::Error;

use crate::bitset::{low_mask, words_for, BitIter, BitSet, ColorSet, VertexSet, WORD};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CollectionError {
    #[error("a collection needs at least one vertex")]
    NoVertices,
    #[error("a collection needs at least one colour")]
    NoColors,
    #[error("graphs[{color}]: loop at vertex {vertex}")]
    Loop { color: usize, vertex: usize },
    #[error("graphs[{color}]: edge [{u},{v}] has an endpoint outside 0..{n}")]
    OutOfRange { color: usize, u: usize, v: usize, n: usize },
    #[error("graphs[{color}]: duplicate edge [{u},{v}]")]
    Duplicate { color: usize, u: usize, v: usize },
    #[error("graph {color} has {found} vertices, expected {expected}")]
    SizeMismatch { color: usize, found: usize, expected: usize },
    #[error("colour lists are undefined for the loop ({0},{0})")]
    LoopQuery(usize),
    #[error("vertex {vertex} outside 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("colour {color} outside 0..{colors}")]
    ColorOutOfRange { color: usize, colors: usize },
}

/// A simple undirected graph on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    stride: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let stride = words_for(n).max(1);
        Self {
            n,
            stride,
            rows: vec![0; stride * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.set_edge(u, v, true);
            }
        }
        g
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints. `color` only labels the error.
    pub fn from_edges(
        n: usize,
        color: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CollectionError> {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(CollectionError::OutOfRange { color, u, v, n });
            }
            if u == v {
                return Err(CollectionError::Loop { color, vertex: u });
            }
            if g.has_edge(u, v) {
                return Err(CollectionError::Duplicate { color, u: u.min(v), v: u.max(v) });
            }
            g.set_edge(u, v, true);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Adds or removes `uv`. Panics on loops or out-of-range endpoints.
    pub fn set_edge(&mut self, u: usize, v: usize, present: bool) {
        assert!(u != v && u < self.n && v < self.n, "invalid edge ({u},{v})");
        for (a, b) in [(u, v), (v, u)] {
            let word = &mut self.rows[a * self.stride + b / WORD];
            if present {
                *word |= 1 << (b % WORD);
            } else {
                *word &= !(1 << (b % WORD));
            }
        }
    }

    pub fn toggle_edge(&mut self, u: usize, v: usize) {
        let present = self.has_edge(u, v);
        self.set_edge(u, v, !present);
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.rows[u * self.stride + v / WORD] >> (v % WORD) & 1 == 1
    }

    pub fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.stride..(v + 1) * self.stride]
    }

    /// Neighbourhood of `v` as a single word; requires `n <= 64`.
    pub fn row_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= WORD);
        self.rows[v * self.stride]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v)
            .iter()
            .enumerate()
            .flat_map(|(wi, &w)| BitIter(w).map(move |b| wi * WORD + b))
    }

    pub fn neighborhood(&self, v: usize) -> VertexSet {
        BitSet::from_members(self.n, self.neighbors(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// `d_G(v, X)`: neighbours of `v` inside `set`.
    pub fn degree_into(&self, v: usize, set: &VertexSet) -> usize {
        self.row(v)
            .iter()
            .zip(set.words())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// `e_G(X, Y)`: edges with one endpoint in `X` and the other in `Y`;
    /// an edge inside `X ∩ Y` is counted once.
    pub fn edges_between(&self, x: &VertexSet, y: &VertexSet) -> usize {
        let ordered: usize = x.iter().map(|a| self.degree_into(a, y)).sum();
        ordered - self.edges_within(&x.intersection(y))
    }

    /// `e(G[X])`.
    pub fn edges_within(&self, x: &VertexSet) -> usize {
        x.iter().map(|a| self.degree_into(a, x)).sum::<usize>() / 2
    }

    pub fn complement(&self) -> Graph {
        let mut g = self.clone();
        for v in 0..self.n {
            for wi in 0..self.stride {
                let lo = wi * WORD;
                let bits = if lo >= self.n { 0 } else { low_mask(self.n - lo) };
                let word = &mut g.rows[v * self.stride + wi];
                *word = !*word & bits;
                if v / WORD == wi {
                    *word &= !(1 << (v % WORD));
                }
            }
        }
        g
    }
}

/// The collection `(G_0, ..., G_{s-1})` on vertex set `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GraphCollection {
    n: usize,
    graphs: Vec<Graph>,
}

impl GraphCollection {
    pub fn new(n: usize, graphs: Vec<Graph>) -> Result<Self, CollectionError> {
        if n == 0 {
            return Err(CollectionError::NoVertices);
        }
        if graphs.is_empty() {
            return Err(CollectionError::NoColors);
        }
        if let Some((color, g)) = graphs.iter().enumerate().find(|(_, g)| g.n() != n) {
            return Err(CollectionError::SizeMismatch { color, found: g.n(), expected: n });
        }
        Ok(Self { n, graphs })
    }

    pub fn from_edge_lists(n: usize, lists: &[Vec<(usize, usize)>]) -> Result<Self, CollectionError> {
        let graphs = lists
            .iter()
            .enumerate()
            .map(|(c, edges)| Graph::from_edges(n, c, edges.iter().copied()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, graphs)
    }

    /// `s` copies of one graph.
    pub fn uniform(graph: Graph, colors: usize) -> Result<Self, CollectionError> {
        Self::new(graph.n(), vec![graph; colors])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> usize {
        self.graphs.len()
    }

    pub fn graph(&self, c: usize) -> &Graph {
        &self.graphs[c]
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    pub fn into_graphs(self) -> Vec<Graph> {
        self.graphs
    }

    /// `δ(G)`: the minimum over colours and vertices of the degree.
    pub fn min_degree(&self) -> usize {
        self.graphs.iter().map(Graph::min_degree).min().unwrap_or(0)
    }

    /// `L(uv)`: the colours whose graph contains `uv`.
    pub fn color_list(&self, u: usize, v: usize) -> Result<ColorSet, CollectionError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(CollectionError::LoopQuery(u));
        }
        Ok(BitSet::from_members(
            self.colors(),
            (0..self.colors()).filter(|&c| self.graphs[c].has_edge(u, v)),
        ))
    }

    /// `L(uv)` as a mask; requires at most 64 colours.
    pub fn color_mask(&self, u: usize, v: usize) -> u64 {
        debug_assert!(self.colors() <= WORD);
        self.graphs
            .iter()
            .enumerate()
            .filter(|(_, g)| g.has_edge(u, v))
            .fold(0, |m, (c, _)| m | 1 << c)
    }

    pub fn has_edge(&self, c: usize, u: usize, v: usize) -> bool {
        c < self.colors() && self.graphs[c].has_edge(u, v)
    }

    /// `e_{G_c}(X, Y)` with the once-counting convention on `X ∩ Y`.
    pub fn edge_count(&self, c: usize, x: &VertexSet, y: &VertexSet) -> Result<usize, CollectionError> {
        if c >= self.colors() {
            return Err(CollectionError::ColorOutOfRange { color: c, colors: self.colors() });
        }
        Ok(self.graphs[c].edges_between(x, y))
    }

    /// `e_G(X, Y)` summed over the colours in `colors`.
    pub fn collection_edge_count(&self, colors: &ColorSet, x: &VertexSet, y: &VertexSet) -> usize {
        colors
            .iter()
            .filter(|&c| c < self.colors())
            .map(|c| self.graphs[c].edges_between(x, y))
            .sum()
    }

    /// The graph whose edges appear in at least one colour.
    pub fn union_graph(&self) -> Graph {
        let mut out = Graph::empty(self.n);
        for g in &self.graphs {
            for (o, r) in out.rows.iter_mut().zip(&g.rows) {
                *o |= r;
            }
        }
        out
    }

    /// A new collection with `graph` appended as the last colour.
    pub fn with_extra_color(&self, graph: Graph) -> Result<Self, CollectionError> {
        let mut graphs = self.graphs.clone();
        graphs.push(graph);
        Self::new(self.n, graphs)
    }

    /// The sub-collection on the given colours, renumbered in order.
    pub fn restrict_colors(&self, colors: impl IntoIterator<Item = usize>) -> Result<Self, CollectionError> {
        let graphs = colors
            .into_iter()
            .map(|c| {
                self.graphs
                    .get(c)
                    .cloned()
                    .ok_or(CollectionError::ColorOutOfRange { color: c, colors: self.colors() })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(self.n, graphs)
    }

    /// Total number of colour-edge toggles separating two collections of the
    /// same shape, or `None` when the shapes differ.
    pub fn toggle_distance(&self, other: &GraphCollection) -> Option<usize> {
        if self.n != other.n || self.colors() != other.colors() {
            return None;
        }
        let ones: usize = self
            .graphs
            .iter()
            .zip(&other.graphs)
            .flat_map(|(a, b)| a.rows.iter().zip(&b.rows).map(|(x, y)| (x ^ y).count_ones() as usize))
            .sum();
        Some(ones / 2)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<(), CollectionError> {
        if v < self.n {
            Ok(())
        } else {
            Err(CollectionError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        Graph::complete(n)
    }

    #[test]
    fn min_degree_of_complete_copies() {
        let g = GraphCollection::uniform(k(4), 4).unwrap();
        assert_eq!(g.min_degree(), 3);
    }

    #[test]
    fn parser_level_rejections() {
        assert_eq!(
            Graph::from_edges(3, 2, [(0, 0)]),
            Err(CollectionError::Loop { color: 2, vertex: 0 })
        );
        assert_eq!(
            Graph::from_edges(3, 0, [(0, 1), (1, 0)]),
            Err(CollectionError::Duplicate { color: 0, u: 0, v: 1 })
        );
        assert!(matches!(
            Graph::from_edges(3, 0, [(0, 3)]),
            Err(CollectionError::OutOfRange { .. })
        ));
        assert_eq!(GraphCollection::new(3, vec![]), Err(CollectionError::NoColors));
    }

    #[test]
    fn color_list_rejects_loops() {
        let g = GraphCollection::uniform(k(3), 3).unwrap();
        assert_eq!(g.color_list(1, 1), Err(CollectionError::LoopQuery(1)));
        assert_eq!(g.color_list(0, 2).unwrap().to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn edge_count_counts_overlap_once() {
        // path 0-1-2-3 with X = {0,1,2}, Y = {1,2,3}
        let g = Graph::from_edges(4, 0, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let x = BitSet::from_members(4, [0, 1, 2]);
        let y = BitSet::from_members(4, [1, 2, 3]);
        assert_eq!(g.edges_between(&x, &y), 3);
        assert_eq!(g.edges_between(&x, &x), 2);
        let full = BitSet::full(4);
        assert_eq!(g.edges_between(&full, &full), 3);
    }

    #[test]
    fn complement_of_wide_graph() {
        let g = Graph::from_edges(70, 0, [(0, 69), (3, 64)]).unwrap();
        let c = g.complement();
        assert_eq!(c.edge_count(), 70 * 69 / 2 - 2);
        assert!(!c.has_edge(0, 69));
        assert!(!c.has_edge(5, 5));
        assert_eq!(c.degree(0), 68);
    }

    #[test]
    fn toggle_distance_counts_pairs() {
        let a = GraphCollection::uniform(k(4), 2).unwrap();
        let mut g = k(4);
        g.toggle_edge(0, 1);
        let b = GraphCollection::new(4, vec![k(4), g]).unwrap();
        assert_eq!(a.toggle_distance(&b), Some(1));
    }
}

//! Absorbing paths and the two insertion operations.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AbsorptionError;
use crate::bitset::{BitSet, ColorSet, VertexSet};
use crate::collection::GraphCollection;
use crate::constructions::seeded;
use crate::transversal::TransversalSubgraph;

/// Graphs up to this order are enumerated in full; larger ones are sampled.
pub const ENUMERATION_MAX_N: usize = 30;

/// A `c`-absorbing path `v1 v2 v3 v4` of the anchor pair `(v, u)`:
/// `c ∈ L(v2 v)` and the colour of `v2 v3` lies in `L(v3 u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbsorbingPathRecord {
    pub vertices: [usize; 4],
    /// Colours of `v1v2`, `v2v3`, `v3v4`.
    pub colors: [usize; 3],
    pub absorbed_color: usize,
    pub anchor: (usize, usize),
}

impl AbsorbingPathRecord {
    /// Re-checks the record from scratch against `g`.
    pub fn validate(&self, g: &GraphCollection) -> Result<(), AbsorptionError> {
        let bad = |why: String| Err(AbsorptionError::InvalidRecord(why));
        let [_, v2, v3, _] = self.vertices;
        let (v, u) = self.anchor;
        let n = g.n();
        if self.vertices.iter().chain([&v, &u]).any(|&x| x >= n) {
            return bad("vertex out of range".into());
        }
        if self.colors.iter().chain([&self.absorbed_color]).any(|&c| c >= g.colors()) {
            return bad("colour out of range".into());
        }
        for x in 0..4 {
            if self.vertices[..x].contains(&self.vertices[x]) {
                return bad(format!("vertex {} repeated on the path", self.vertices[x]));
            }
        }
        if self.colors[0] == self.colors[1] || self.colors[1] == self.colors[2] || self.colors[0] == self.colors[2] {
            return bad("path colours are not distinct".into());
        }
        for (i, w) in self.vertices.windows(2).enumerate() {
            if !g.has_edge(self.colors[i], w[0], w[1]) {
                return bad(format!("{}{} is not an edge of colour {}", w[0], w[1], self.colors[i]));
            }
        }
        if self.vertices.contains(&v) || self.vertices.contains(&u) {
            return bad("an anchor lies on the path".into());
        }
        if !g.has_edge(self.absorbed_color, v2, v) {
            return bad(format!("colour {} is missing on {v2}{v}", self.absorbed_color));
        }
        if !g.has_edge(self.colors[1], v3, u) {
            return bad(format!("colour {} is missing on {v3}{u}", self.colors[1]));
        }
        Ok(())
    }
}

/// Vertices and colours a search must avoid.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Forbidden {
    pub vertices: Vec<usize>,
    pub colors: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOptions {
    /// Stop after this many records.
    pub limit: Option<usize>,
    /// Number of random 4-tuples drawn when `n` is beyond the exhaustive range.
    pub samples: usize,
    pub seed: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self { limit: None, samples: 100_000, seed: 0 }
    }
}

struct Search<'a> {
    g: &'a GraphCollection,
    c: usize,
    v: usize,
    u: usize,
    free_vertices: VertexSet,
    free_colors: ColorSet,
}

impl<'a> Search<'a> {
    fn new(g: &'a GraphCollection, c: usize, v: usize, u: usize, forbidden: &Forbidden) -> Result<Self, AbsorptionError> {
        let n = g.n();
        if v >= n || u >= n || c >= g.colors() {
            return Err(AbsorptionError::InvalidRecord("anchor or colour out of range".into()));
        }
        if forbidden.vertices.contains(&v) || forbidden.vertices.contains(&u) {
            return Err(AbsorptionError::Precondition("an anchor is forbidden".into()));
        }
        if forbidden.colors.contains(&c) {
            return Err(AbsorptionError::Precondition(format!("colour {c} is forbidden")));
        }
        let mut free_vertices = BitSet::full(n);
        for &x in forbidden.vertices.iter().chain([&v, &u]) {
            if x < n {
                free_vertices.remove(x);
            }
        }
        let mut free_colors = BitSet::full(g.colors());
        for &x in forbidden.colors.iter().chain([&c]) {
            if x < g.colors() {
                free_colors.remove(x);
            }
        }
        Ok(Self { g, c, v, u, free_vertices, free_colors })
    }

    fn list(&self, x: usize, y: usize) -> ColorSet {
        self.g.color_list(x, y).expect("in range").intersection(&self.free_colors)
    }

    /// The three usable colour lists of `v1 v2 v3 v4`, or `None` when the
    /// membership conditions fail outright.
    fn lists(&self, t: [usize; 4]) -> Option<[ColorSet; 3]> {
        let [v1, v2, v3, v4] = t;
        if !t.iter().all(|&x| self.free_vertices.contains(x)) || !self.g.has_edge(self.c, v2, self.v) {
            return None;
        }
        let middle = self.list(v2, v3).intersection(&self.g.color_list(v3, self.u).expect("in range"));
        if middle.is_empty() {
            return None;
        }
        Some([self.list(v1, v2), middle, self.list(v3, v4)])
    }

    fn record(&self, t: [usize; 4], colors: [usize; 3]) -> AbsorbingPathRecord {
        AbsorbingPathRecord { vertices: t, colors, absorbed_color: self.c, anchor: (self.v, self.u) }
    }

    fn push_all(&self, t: [usize; 4], lists: &[ColorSet; 3], out: &mut Vec<AbsorbingPathRecord>, limit: usize) {
        for a in lists[0].iter() {
            for b in lists[1].iter().filter(|&b| b != a) {
                for d in lists[2].iter().filter(|&d| d != a && d != b) {
                    if out.len() >= limit {
                        return;
                    }
                    out.push(self.record(t, [a, b, d]));
                }
            }
        }
    }

    /// Candidate middles `(v2, v3)` in lexicographic order.
    fn middles(&self) -> Vec<(usize, usize)> {
        let g_c = self.g.graph(self.c);
        g_c.neighbors(self.v)
            .filter(|&v2| self.free_vertices.contains(v2))
            .flat_map(|v2| self.free_vertices.iter().filter(move |&v3| v3 != v2).map(move |v3| (v2, v3)))
            .collect()
    }
}

/// All `c`-absorbing paths of `(v, u)` whose vertices and colours avoid
/// `forbidden`, `{v, u}` and `c`, in lexicographic order of
/// `(v1, v2, v3, v4, colours)`. Beyond [`ENUMERATION_MAX_N`] vertices the
/// result is a deduplicated sample instead.
pub fn enumerate_absorbing_paths(
    g: &GraphCollection,
    c: usize,
    v: usize,
    u: usize,
    forbidden: &Forbidden,
    options: EnumerationOptions,
) -> Result<Vec<AbsorbingPathRecord>, AbsorptionError> {
    let search = Search::new(g, c, v, u, forbidden)?;
    let limit = options.limit.unwrap_or(usize::MAX);
    if g.n() > ENUMERATION_MAX_N {
        return Ok(sample(&search, options, limit));
    }
    let middles = search.middles();
    let per_v1: Vec<Vec<AbsorbingPathRecord>> = search
        .free_vertices
        .to_vec()
        .into_par_iter()
        .map(|v1| {
            let mut out = Vec::new();
            for &(v2, v3) in middles.iter().filter(|&&(v2, v3)| v2 != v1 && v3 != v1) {
                for v4 in search.free_vertices.iter().filter(|&v4| v4 != v1 && v4 != v2 && v4 != v3) {
                    if let Some(lists) = search.lists([v1, v2, v3, v4]) {
                        search.push_all([v1, v2, v3, v4], &lists, &mut out, limit);
                        if out.len() >= limit {
                            return out;
                        }
                    }
                }
            }
            out
        })
        .collect();
    Ok(per_v1.into_iter().flatten().take(limit).collect())
}

fn sample(search: &Search<'_>, options: EnumerationOptions, limit: usize) -> Vec<AbsorbingPathRecord> {
    let mut rng = seeded(options.seed);
    let free = search.free_vertices.to_vec();
    let middles = search.middles();
    let mut out = std::collections::BTreeSet::new();
    if free.len() < 4 || middles.is_empty() {
        return Vec::new();
    }
    for _ in 0..options.samples {
        let (v2, v3) = middles[rng.gen_range(0..middles.len())];
        let v1 = free[rng.gen_range(0..free.len())];
        let v4 = free[rng.gen_range(0..free.len())];
        let t = [v1, v2, v3, v4];
        if (0..4).any(|x| t[..x].contains(&t[x])) {
            continue;
        }
        let Some(lists) = search.lists(t) else { continue };
        let pick = |set: &ColorSet, rng: &mut rand_chacha::ChaCha8Rng, avoid: &[usize]| {
            let pool: Vec<usize> = set.iter().filter(|x| !avoid.contains(x)).collect();
            (!pool.is_empty()).then(|| pool[rng.gen_range(0..pool.len())])
        };
        let Some(b) = pick(&lists[1], &mut rng, &[]) else { continue };
        let Some(a) = pick(&lists[0], &mut rng, &[b]) else { continue };
        let Some(d) = pick(&lists[2], &mut rng, &[a, b]) else { continue };
        out.insert(search.record(t, [a, b, d]));
        if out.len() >= limit {
            break;
        }
    }
    out.into_iter().collect()
}

/// The exact number of records [`enumerate_absorbing_paths`] would list
/// exhaustively, by inclusion-exclusion over the colour lists.
pub fn count_absorbing_paths(
    g: &GraphCollection,
    c: usize,
    v: usize,
    u: usize,
    forbidden: &Forbidden,
) -> Result<u128, AbsorptionError> {
    let search = Search::new(g, c, v, u, forbidden)?;
    let middles = search.middles();
    Ok(search
        .free_vertices
        .to_vec()
        .into_par_iter()
        .map(|v1| {
            let mut total = 0u128;
            for &(v2, v3) in middles.iter().filter(|&&(v2, v3)| v2 != v1 && v3 != v1) {
                for v4 in search.free_vertices.iter().filter(|&v4| v4 != v1 && v4 != v2 && v4 != v3) {
                    if let Some([x, y, w]) = search.lists([v1, v2, v3, v4]) {
                        let size = |s: &ColorSet| s.len() as i128;
                        let xy = size(&x.intersection(&y));
                        let xw = size(&x.intersection(&w));
                        let yw = size(&y.intersection(&w));
                        let xyw = size(&x.intersection(&y).intersection(&w));
                        let injective = size(&x) * size(&y) * size(&w) - xy * size(&w) - xw * size(&y) - yw * size(&x)
                            + 2 * xyw;
                        total += injective as u128;
                    }
                }
            }
            total
        })
        .sum())
}

/// The cycle's vertex order rotated and oriented so that the record's path
/// occupies positions `0..4`, with matching step colours.
fn align(cycle: &TransversalSubgraph, record: &AbsorbingPathRecord) -> Result<(Vec<usize>, Vec<usize>), AbsorptionError> {
    let (order, colors) = cycle.cycle_walk().ok_or(AbsorptionError::NotCycle)?;
    let t = order.len();
    for (order, colors) in [(order.clone(), colors.clone()), reversed(&order, &colors)] {
        if let Some(start) = order.iter().position(|&x| x == record.vertices[0]) {
            let o: Vec<usize> = (0..t).map(|i| order[(start + i) % t]).collect();
            let c: Vec<usize> = (0..t).map(|i| colors[(start + i) % t]).collect();
            if o[..4] == record.vertices && c[..3] == record.colors {
                return Ok((o, c));
            }
        }
    }
    Err(AbsorptionError::NotSegment)
}

fn reversed(order: &[usize], colors: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let t = order.len();
    let o: Vec<usize> = (0..t).map(|i| order[(t - i) % t]).collect();
    // step i of the reversed walk is step t-1-i of the original
    let c: Vec<usize> = (0..t).map(|i| colors[t - 1 - i]).collect();
    (o, c)
}

/// Inserts `v = record.anchor.0` between `v2` and `v3`: `v2 v` takes the
/// absorbed colour and `v v3` the old colour of `v2 v3`.
pub fn absorb_vertex(
    g: &GraphCollection,
    cycle: &TransversalSubgraph,
    record: &AbsorbingPathRecord,
) -> Result<TransversalSubgraph, AbsorptionError> {
    if record.anchor.0 != record.anchor.1 {
        return Err(AbsorptionError::Precondition("absorbing a vertex needs a record with v = u".into()));
    }
    insert(g, cycle, record, &[record.anchor.0], &[])
}

/// Inserts the path `p` with endpoints `record.anchor` between `v2` and
/// `v3`. An edgeless `p` stands for the single vertex `v = u`.
pub fn absorb_path(
    g: &GraphCollection,
    cycle: &TransversalSubgraph,
    record: &AbsorbingPathRecord,
    p: &TransversalSubgraph,
) -> Result<TransversalSubgraph, AbsorptionError> {
    if p.is_empty() {
        return absorb_vertex(g, cycle, record);
    }
    p.validate(g).map_err(AbsorptionError::InvalidInput)?;
    let (mut order, mut colors) = p.path_walk().ok_or(AbsorptionError::NotPath)?;
    let (v, u) = record.anchor;
    if order[0] != v {
        order.reverse();
        colors.reverse();
    }
    if order[0] != v || order[order.len() - 1] != u {
        return Err(AbsorptionError::Precondition(format!("path endpoints are not the anchors ({v}, {u})")));
    }
    insert(g, cycle, record, &order, &colors)
}

fn insert(
    g: &GraphCollection,
    cycle: &TransversalSubgraph,
    record: &AbsorbingPathRecord,
    inner: &[usize],
    inner_colors: &[usize],
) -> Result<TransversalSubgraph, AbsorptionError> {
    cycle.validate(g).map_err(AbsorptionError::InvalidInput)?;
    record.validate(g)?;
    let (order, colors) = align(cycle, record)?;
    if let Some(&x) = inner.iter().find(|x| order.contains(x)) {
        return Err(AbsorptionError::Precondition(format!("vertex {x} already lies on the cycle")));
    }
    let c = record.absorbed_color;
    if colors.contains(&c) {
        return Err(AbsorptionError::Precondition(format!("absorbed colour {c} already used on the cycle")));
    }
    if let Some(&x) = inner_colors.iter().find(|&&x| x == c || colors.contains(&x)) {
        return Err(AbsorptionError::Precondition(format!("path colour {x} clashes with the cycle or the absorbed colour")));
    }
    // order = v1 v2 v3 v4 ...; the step v2 -> v3 has colour colors[1]
    let mut new_order = vec![order[0], order[1]];
    new_order.extend_from_slice(inner);
    new_order.extend_from_slice(&order[2..]);
    let mut new_colors = vec![colors[0], c];
    new_colors.extend_from_slice(inner_colors);
    new_colors.push(colors[1]);
    new_colors.extend_from_slice(&colors[2..]);
    let out = TransversalSubgraph::cycle_from_order(&new_order, &new_colors);
    out.validate(g).map_err(AbsorptionError::InvalidOutput)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::Graph;
    use crate::constructions::{make_h, random_min_degree_collection};
    use crate::transversal::SubgraphKind;

    /// Colours `0..k` restricted to vertices `0..k`.
    fn induced(g: &GraphCollection, k: usize) -> GraphCollection {
        let graphs = (0..k)
            .map(|c| {
                let mut h = Graph::empty(k);
                for (u, v) in g.graph(c).edges().filter(|&(u, v)| u < k && v < k) {
                    h.set_edge(u, v, true);
                }
                h
            })
            .collect();
        GraphCollection::new(k, graphs).unwrap()
    }

    fn falling(n: usize, k: usize) -> u128 {
        (0..k).map(|i| (n - i) as u128).product()
    }

    fn complete(n: usize, s: usize) -> GraphCollection {
        GraphCollection::uniform(Graph::complete(n), s).unwrap()
    }

    #[test]
    fn complete_collection_counts() {
        let g = complete(8, 6);
        let none = Forbidden::default();
        let records = enumerate_absorbing_paths(&g, 0, 0, 1, &none, EnumerationOptions::default()).unwrap();
        assert_eq!(records.len() as u128, falling(6, 4) * falling(5, 3));
        assert_eq!(count_absorbing_paths(&g, 0, 0, 1, &none).unwrap(), falling(6, 4) * falling(5, 3));
        let same = count_absorbing_paths(&g, 0, 3, 3, &none).unwrap();
        assert_eq!(same, falling(7, 4) * falling(5, 3));
        let forbidden = Forbidden { vertices: vec![7], colors: vec![5] };
        assert_eq!(count_absorbing_paths(&g, 0, 0, 1, &forbidden).unwrap(), falling(5, 4) * falling(4, 3));
        assert!(records.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn records_validate_on_extremal_collections() {
        let g = make_h(8, 3, 3).unwrap();
        for (c, v, u) in [(0, 0, 5), (3, 1, 1), (5, 6, 2)] {
            let records = enumerate_absorbing_paths(&g, c, v, u, &Forbidden::default(), EnumerationOptions::default()).unwrap();
            assert_eq!(records.len() as u128, count_absorbing_paths(&g, c, v, u, &Forbidden::default()).unwrap());
            for r in &records {
                r.validate(&g).unwrap();
                assert!(g.has_edge(c, r.vertices[1], v));
            }
        }
    }

    #[test]
    fn preconditions_and_limits() {
        let g = complete(8, 6);
        let f = Forbidden { vertices: vec![0], colors: vec![] };
        assert!(enumerate_absorbing_paths(&g, 0, 0, 1, &f, EnumerationOptions::default()).is_err());
        let f = Forbidden { vertices: vec![], colors: vec![2] };
        assert!(enumerate_absorbing_paths(&g, 2, 0, 1, &f, EnumerationOptions::default()).is_err());
        let opts = EnumerationOptions { limit: Some(17), ..Default::default() };
        assert_eq!(enumerate_absorbing_paths(&g, 0, 0, 1, &Forbidden::default(), opts).unwrap().len(), 17);
    }

    #[test]
    fn sampling_beyond_exhaustive_range() {
        let g = complete(32, 8);
        let opts = EnumerationOptions { limit: None, samples: 500, seed: 3 };
        let records = enumerate_absorbing_paths(&g, 0, 0, 1, &Forbidden::default(), opts).unwrap();
        assert!(!records.is_empty());
        assert!(records.iter().all(|r| r.validate(&g).is_ok()));
    }

    fn square(g: &GraphCollection) -> TransversalSubgraph {
        let c = TransversalSubgraph::cycle_from_order(&[0, 1, 2, 3], &[0, 1, 2, 3]);
        c.validate(g).unwrap();
        c
    }

    #[test]
    fn absorbing_a_vertex() {
        let g = complete(8, 8);
        let cycle = square(&g);
        let record = AbsorbingPathRecord { vertices: [0, 1, 2, 3], colors: [0, 1, 2], absorbed_color: 5, anchor: (6, 6) };
        let out = absorb_vertex(&g, &cycle, &record).unwrap();
        assert_eq!(out.len(), 5);
        assert_eq!(out.vertex_set(8), BitSet::from_members(8, [0, 1, 2, 3, 6]));
        assert_eq!(out.color_set(8), BitSet::from_members(8, [0, 1, 2, 3, 5]));
        let reused = AbsorbingPathRecord { absorbed_color: 3, ..record };
        assert!(matches!(absorb_vertex(&g, &cycle, &reused), Err(AbsorptionError::Precondition(_))));
        // the segment may run against the stored orientation
        let backwards = AbsorbingPathRecord { vertices: [3, 2, 1, 0], colors: [2, 1, 0], ..record };
        assert_eq!(absorb_vertex(&g, &cycle, &backwards).unwrap().len(), 5);
        let off = AbsorbingPathRecord { vertices: [0, 2, 1, 3], colors: [0, 1, 2], ..record };
        assert!(matches!(absorb_vertex(&g, &cycle, &off), Err(AbsorptionError::NotSegment)));
    }

    #[test]
    fn absorbing_a_path() {
        let g = complete(10, 10);
        let cycle = square(&g);
        let p = TransversalSubgraph::path_from_order(&[4, 5, 6], &[6, 7]);
        let record = AbsorbingPathRecord { vertices: [0, 1, 2, 3], colors: [0, 1, 2], absorbed_color: 8, anchor: (4, 6) };
        let out = absorb_path(&g, &cycle, &record, &p).unwrap();
        assert_eq!(out.len(), 7);
        assert_eq!(out.vertex_set(10).len(), 7);
        assert_eq!(out.color_set(10), BitSet::from_members(10, [0, 1, 2, 3, 6, 7, 8]));
        let single = AbsorbingPathRecord { anchor: (4, 4), ..record };
        let empty = TransversalSubgraph::new(SubgraphKind::Path, vec![]);
        assert_eq!(absorb_path(&g, &cycle, &single, &empty), absorb_vertex(&g, &cycle, &single));
        let clash = TransversalSubgraph::path_from_order(&[4, 5, 6], &[6, 8]);
        assert!(absorb_path(&g, &cycle, &record, &clash).is_err());
        let wrong_end = AbsorbingPathRecord { anchor: (4, 5), ..record };
        assert!(absorb_path(&g, &cycle, &wrong_end, &p).is_err());
    }

    #[test]
    fn fuzzed_absorptions_validate() {
        let mut done = 0;
        for seed in 0..400u64 {
            if done == 100 {
                break;
            }
            let g = random_min_degree_collection(10, 10, 5, seed).unwrap();
            let outcome =
                crate::solver::find_transversal_hamilton_cycle(&induced(&g, 6), &crate::solver::SearchBudget::default())
                    .unwrap();
            let Some(cycle) = outcome.witness else { continue };
            let (order, colors) = cycle.cycle_walk().unwrap();
            let mut rng = seeded(seed);
            let v = 6 + rng.gen_range(0..4);
            let c = 6 + rng.gen_range(0..4);
            let t = [order[0], order[1], order[2], order[3]];
            let record = AbsorbingPathRecord { vertices: t, colors: [colors[0], colors[1], colors[2]], absorbed_color: c, anchor: (v, v) };
            if record.validate(&g).is_err() {
                continue;
            }
            let out = absorb_vertex(&g, &cycle, &record).unwrap();
            let mut expected_vertices = cycle.vertices();
            expected_vertices.insert(v);
            let mut expected_colors = cycle.colors();
            expected_colors.insert(c);
            assert_eq!(out.vertices(), expected_vertices);
            assert_eq!(out.colors(), expected_colors);
            done += 1;
        }
        assert_eq!(done, 100);
    }
}

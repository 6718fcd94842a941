//! Collection-level structure: good vertices, crossing pairs, the cross
//! graph, stability and `mu`-niceness of collections.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::niceness::{niceness_verdict, NicenessMode, NicenessVerdict};
use super::partition::{extract_characteristic, CharacteristicPartition};
use super::StructureError;
use crate::bitset::{BitSet, ColorSet, VertexSet};
use crate::closeness::distance::k_subsets;
use crate::collection::{Graph, GraphCollection};
use crate::constructions::seeded;
use crate::scalar::{check_open_range, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColorStructure<T> {
    /// The `eps^3`-niceness verdict; the colour is extremal when not nice.
    pub verdict: NicenessVerdict<T>,
    pub partition: Option<CharacteristicPartition>,
    /// Why an extremal colour has no partition.
    pub failure: Option<String>,
}

impl<T> ColorStructure<T> {
    pub fn is_extremal(&self) -> bool {
        !self.verdict.nice
    }
}

/// Per-colour extremality and characteristic partitions at one `eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureAnalysis<T> {
    pub n: usize,
    pub eps: T,
    pub colors: Vec<ColorStructure<T>>,
}

impl<T: Scalar> StructureAnalysis<T> {
    pub fn new(g: &GraphCollection, eps: T, mode: NicenessMode) -> Result<Self, StructureError> {
        check_open_range("eps", eps, T::one()).map_err(StructureError::Parameter)?;
        let colors = g
            .graphs()
            .par_iter()
            .map(|graph| analyse_color(graph, eps, mode))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { n: g.n(), eps, colors })
    }

    /// `v` is `c`-good when `G_c` is not extremal or `v` lies in `A_c ∪ B_c`.
    /// An extremal colour without a partition makes no vertex good.
    pub fn is_good(&self, c: usize, v: usize) -> bool {
        let s = &self.colors[c];
        if !s.is_extremal() {
            return true;
        }
        s.partition.as_ref().is_some_and(|p| p.contains_good(v))
    }

    /// Both colours extremal with partitions and `|A_i △ A_j|`,
    /// `|A_i △ B_j|` both at least `delta n`.
    pub fn crossing(&self, i: usize, j: usize, delta: T) -> bool {
        let (Some(p), Some(q)) = (&self.colors[i].partition, &self.colors[j].partition) else {
            return false;
        };
        let floor = delta * T::from_usize(self.n);
        T::from_usize(p.a.symmetric_difference_len(&q.a)) >= floor
            && T::from_usize(p.a.symmetric_difference_len(&q.b)) >= floor
    }

    /// The graph on colours whose edges are the `delta`-crossing pairs.
    pub fn cross_graph(&self, delta: T) -> Graph {
        let s = self.colors.len();
        let mut out = Graph::empty(s);
        for i in 0..s {
            for j in i + 1..s {
                if self.crossing(i, j, delta) {
                    out.set_edge(i, j, true);
                }
            }
        }
        out
    }
}

fn analyse_color<T: Scalar>(graph: &Graph, eps: T, mode: NicenessMode) -> Result<ColorStructure<T>, StructureError> {
    let verdict = niceness_verdict(graph, eps.cube(), mode)?;
    if verdict.nice {
        return Ok(ColorStructure { verdict, partition: None, failure: None });
    }
    let ex = extract_characteristic(graph, eps, mode)?;
    Ok(ColorStructure { verdict, partition: ex.partition, failure: ex.failure })
}

pub fn is_good_vertex<T: Scalar>(
    g: &GraphCollection,
    c: usize,
    v: usize,
    eps: T,
    mode: NicenessMode,
) -> Result<bool, StructureError> {
    let s = analyse_color(g.graph(c), eps, mode)?;
    Ok(!s.is_extremal() || s.partition.is_some_and(|p| p.contains_good(v)))
}

pub fn cross_graph<T: Scalar>(g: &GraphCollection, eps: T, delta: T, mode: NicenessMode) -> Result<Graph, StructureError> {
    Ok(StructureAnalysis::new(g, eps, mode)?.cross_graph(delta))
}

/// For a `delta`-crossing pair with `eps <= delta / 8`, whether all four
/// intersections `X_i ∩ Y_j` (`X, Y ∈ {A, B}`) have at least `delta n / 4`
/// vertices.
pub fn check_crossing_observation<T: Scalar>(
    g: &GraphCollection,
    i: usize,
    j: usize,
    eps: T,
    delta: T,
    mode: NicenessMode,
) -> Result<bool, StructureError> {
    if eps > delta / T::from_usize(8) {
        return Err(StructureError::Precondition(format!("eps = {eps} exceeds delta / 8 = {}", delta / T::from_usize(8))));
    }
    let analysis = StructureAnalysis::new(&g.restrict_colors([i, j]).map_err(|e| StructureError::Precondition(e.to_string()))?, eps, mode)?;
    if !analysis.crossing(0, 1, delta) {
        return Err(StructureError::Precondition(format!("colours {i} and {j} are not {delta}-crossing")));
    }
    let (p, q) = (
        analysis.colors[0].partition.as_ref().expect("crossing implies partition"),
        analysis.colors[1].partition.as_ref().expect("crossing implies partition"),
    );
    let floor = delta * T::from_usize(g.n()) / T::from_usize(4);
    Ok([&p.a, &p.b]
        .iter()
        .all(|x| [&q.a, &q.b].iter().all(|y| T::from_usize(x.intersection_len(y)) >= floor)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    StronglyStable,
    WeaklyStable,
    NotStable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict<T> {
    pub status: StabilityStatus,
    /// Colours that are `alpha`-nice.
    pub nice_colors: ColorSet,
    pub cross_edge_count: usize,
    pub gamma: T,
    pub alpha: T,
    pub eps: T,
    pub delta: T,
    /// False if some "nice" verdict rests on local search.
    pub exact: bool,
}

/// Strongly stable: at least `gamma n` colours are `alpha`-nice. Weakly
/// stable: the cross graph has at least `delta n^2` edges. Both witnesses are
/// always computed.
pub fn classify_stability<T: Scalar>(
    g: &GraphCollection,
    gamma: T,
    alpha: T,
    eps: T,
    delta: T,
    mode: NicenessMode,
) -> Result<StabilityVerdict<T>, StructureError> {
    Ok(classify_with_analysis(g, gamma, alpha, eps, delta, mode)?.0)
}

/// [`classify_stability`] together with the analysis behind the cross graph.
pub(crate) fn classify_with_analysis<T: Scalar>(
    g: &GraphCollection,
    gamma: T,
    alpha: T,
    eps: T,
    delta: T,
    mode: NicenessMode,
) -> Result<(StabilityVerdict<T>, StructureAnalysis<T>), StructureError> {
    for (name, value) in [("gamma", gamma), ("alpha", alpha), ("eps", eps), ("delta", delta)] {
        check_open_range(name, value, T::one()).map_err(StructureError::Parameter)?;
    }
    let n = T::from_usize(g.n());
    let verdicts = g
        .graphs()
        .par_iter()
        .map(|graph| niceness_verdict(graph, alpha, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let nice_colors = BitSet::from_members(g.colors(), (0..g.colors()).filter(|&c| verdicts[c].nice));
    let analysis = StructureAnalysis::new(g, eps, mode)?;
    let cross_edge_count = analysis.cross_graph(delta).edge_count();
    let exact = verdicts.iter().all(|v| v.exact) && analysis.colors.iter().all(|c| c.verdict.exact);
    let status = if T::from_usize(nice_colors.len()) >= gamma * n {
        StabilityStatus::StronglyStable
    } else if T::from_usize(cross_edge_count) >= delta * n * n {
        StabilityStatus::WeaklyStable
    } else {
        StabilityStatus::NotStable
    };
    Ok((StabilityVerdict { status, nice_colors, cross_edge_count, gamma, alpha, eps, delta, exact }, analysis))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollectionNicenessFailure {
    /// `e_G(A) <= mu n^3`.
    Internal,
    /// `e_G(A, V \ A) <= mu n^3`.
    Cross,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionNicenessWitness {
    pub a: VertexSet,
    pub failure: CollectionNicenessFailure,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectionNiceness<T> {
    pub nice: bool,
    pub mu: T,
    pub witness: Option<CollectionNicenessWitness>,
    pub exact: bool,
}

/// Whether every `floor(n/2)`-set `A` has `e_G(A) > mu n^3` and
/// `e_G(A, V \ A) > mu n^3`, summing over colours.
pub fn is_collection_nice<T: Scalar>(
    g: &GraphCollection,
    mu: T,
    mode: NicenessMode,
) -> Result<CollectionNiceness<T>, StructureError> {
    check_open_range("mu", mu, T::one()).map_err(StructureError::Parameter)?;
    let n = g.n();
    let k = n / 2;
    let weights = Weights::new(g);
    let (internal, cross, exact) = match mode {
        NicenessMode::Exhaustive => {
            if n > NicenessMode::EXHAUSTIVE_MAX_N {
                return Err(StructureError::TooLarge { n, max: NicenessMode::EXHAUSTIVE_MAX_N });
            }
            let masks: Vec<u64> = k_subsets(n, k).collect();
            let scan = |f: &(dyn Fn(&[usize]) -> usize + Sync)| {
                masks
                    .par_iter()
                    .map(|&m| {
                        let members: Vec<usize> = (0..n).filter(|&v| m >> v & 1 == 1).collect();
                        (f(&members), m)
                    })
                    .min()
                    .map(|(c, m)| (c, BitSet::from_mask(n, m)))
                    .expect("at least one set")
            };
            let internal = scan(&|a| weights.internal(a));
            let cross = scan(&|a| weights.cross(a));
            (internal, cross, true)
        }
        NicenessMode::Heuristic { restarts, seed } => {
            let internal = weights.descend(k, restarts, seed, false);
            let cross = weights.descend(k, restarts, seed, true);
            (internal, cross, false)
        }
    };
    let bound = mu * T::from_usize(n).cube();
    let witness = if T::from_usize(internal.0) <= bound {
        Some(CollectionNicenessWitness { a: internal.1, failure: CollectionNicenessFailure::Internal, count: internal.0 })
    } else if T::from_usize(cross.0) <= bound {
        Some(CollectionNicenessWitness { a: cross.1, failure: CollectionNicenessFailure::Cross, count: cross.0 })
    } else {
        None
    };
    Ok(CollectionNiceness { nice: witness.is_none(), mu, exact: exact || witness.is_some(), witness })
}

/// `w(u, v)` = number of colours containing `uv`.
struct Weights {
    n: usize,
    w: Vec<u32>,
    degree: Vec<usize>,
}

impl Weights {
    fn new(g: &GraphCollection) -> Self {
        let n = g.n();
        let mut w = vec![0u32; n * n];
        let mut degree = vec![0usize; n];
        for graph in g.graphs() {
            for (u, v) in graph.edges() {
                w[u * n + v] += 1;
                w[v * n + u] += 1;
                degree[u] += 1;
                degree[v] += 1;
            }
        }
        Self { n, w, degree }
    }

    fn into_set(&self, v: usize, set: &[usize]) -> usize {
        set.iter().map(|&x| self.w[v * self.n + x] as usize).sum()
    }

    fn internal(&self, a: &[usize]) -> usize {
        a.iter().map(|&v| self.into_set(v, a)).sum::<usize>() / 2
    }

    fn cross(&self, a: &[usize]) -> usize {
        a.iter().map(|&v| self.degree[v]).sum::<usize>() - 2 * self.internal(a)
    }

    /// Swap descent on `e(A)` (or on `e(A, V \ A)` when `cross`).
    fn descend(&self, k: usize, restarts: usize, seed: u64, cross: bool) -> (usize, VertexSet) {
        let n = self.n;
        let mut rng = seeded(seed);
        let objective = |internal: i64, deg_sum: i64| if cross { deg_sum - 2 * internal } else { internal };
        let mut best: Option<(usize, Vec<usize>)> = None;
        for round in 0..restarts.max(1) {
            let mut order: Vec<usize> = (0..n).collect();
            if round > 0 {
                order.shuffle(&mut rng);
            }
            let mut in_a = vec![false; n];
            for &v in &order[..k] {
                in_a[v] = true;
            }
            let members = |in_a: &[bool]| (0..n).filter(|&v| in_a[v]).collect::<Vec<_>>();
            let mut d_a: Vec<i64> = (0..n).map(|v| self.into_set(v, &members(&in_a)) as i64).collect();
            let mut internal = self.internal(&members(&in_a)) as i64;
            let mut deg_sum: i64 = (0..n).filter(|&v| in_a[v]).map(|v| self.degree[v] as i64).sum();
            loop {
                let current = objective(internal, deg_sum);
                let mut step: Option<(i64, usize, usize)> = None;
                for out in (0..n).filter(|&v| in_a[v]) {
                    for inn in (0..n).filter(|&v| !in_a[v]) {
                        let new_internal = internal - d_a[out] + d_a[inn] - self.w[out * n + inn] as i64;
                        let new_deg = deg_sum - self.degree[out] as i64 + self.degree[inn] as i64;
                        let value = objective(new_internal, new_deg);
                        if value < step.map_or(current, |s| s.0) {
                            step = Some((value, out, inn));
                        }
                    }
                }
                let Some((_, out, inn)) = step else { break };
                internal = internal - d_a[out] + d_a[inn] - self.w[out * n + inn] as i64;
                deg_sum = deg_sum - self.degree[out] as i64 + self.degree[inn] as i64;
                in_a[out] = false;
                in_a[inn] = true;
                for (v, d) in d_a.iter_mut().enumerate() {
                    *d += self.w[v * n + inn] as i64 - self.w[v * n + out] as i64;
                }
            }
            let value = objective(internal, deg_sum) as usize;
            if best.as_ref().map_or(true, |b| value < b.0) {
                best = Some((value, members(&in_a)));
            }
        }
        let (value, set) = best.expect("at least one restart");
        (value, BitSet::from_members(n, set))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{complete_bipartite_graph, make_h, make_two_cliques, Bipartition};
    use crate::Rational;

    fn q(text: &str) -> Rational {
        Rational::parse(text).unwrap()
    }

    fn evens(n: usize) -> Bipartition {
        Bipartition::from_part(BitSet::from_members(n, (0..n).step_by(2)))
    }

    #[test]
    fn goodness() {
        let k = GraphCollection::uniform(Graph::complete(12), 12).unwrap();
        let a = StructureAnalysis::new(&k, q("0.2"), NicenessMode::Exhaustive).unwrap();
        assert!((0..12).all(|v| a.is_good(0, v)));
        let ec1 = make_two_cliques(20).unwrap();
        let a = StructureAnalysis::new(&ec1, q("0.2"), NicenessMode::auto(20)).unwrap();
        assert_eq!((0..20).filter(|&v| !a.is_good(0, v)).count(), 8);
        let p = a.colors[0].partition.as_ref().unwrap();
        assert!(p.a.iter().all(|v| a.is_good(0, v)));
        assert_eq!(is_good_vertex(&ec1, 0, p.a.iter().next().unwrap(), q("0.2"), NicenessMode::auto(20)), Ok(true));
    }

    #[test]
    fn cross_graph_examples() {
        let same = make_h(12, 12, 0).unwrap();
        assert_eq!(cross_graph(&same, q("0.2"), q("0.25"), NicenessMode::Exhaustive).unwrap().edge_count(), 0);

        let n = 20;
        let g = GraphCollection::new(
            n,
            vec![complete_bipartite_graph(&Bipartition::canonical(n)), complete_bipartite_graph(&evens(n))],
        )
        .unwrap();
        let cg = cross_graph(&g, q("0.2"), q("0.25"), NicenessMode::auto(n)).unwrap();
        assert!(cg.has_edge(0, 1));

        let mixed = GraphCollection::new(12, vec![make_two_cliques(12).unwrap().graph(0).clone(), Graph::complete(12)]).unwrap();
        assert_eq!(cross_graph(&mixed, q("0.2"), q("0.1"), NicenessMode::Exhaustive).unwrap().edge_count(), 0);
    }

    #[test]
    fn crossing_observation_holds_on_planted_pair() {
        let n = 40;
        let g = GraphCollection::new(
            n,
            vec![complete_bipartite_graph(&Bipartition::canonical(n)), complete_bipartite_graph(&evens(n))],
        )
        .unwrap();
        let mode = NicenessMode::auto(n);
        assert_eq!(check_crossing_observation(&g, 0, 1, q("0.025"), q("0.2"), mode), Ok(true));
        let same = make_h(40, 0, 2).unwrap();
        assert!(matches!(
            check_crossing_observation(&same, 0, 1, q("0.025"), q("0.2"), mode),
            Err(StructureError::Precondition(_))
        ));
        assert!(check_crossing_observation(&g, 0, 1, q("0.05"), q("0.2"), mode).is_err());
    }

    #[test]
    fn stability_examples() {
        let k = GraphCollection::uniform(Graph::complete(12), 12).unwrap();
        let v = classify_stability(&k, q("0.5"), q("0.05"), q("0.2"), q("0.2"), NicenessMode::Exhaustive).unwrap();
        assert_eq!(v.status, StabilityStatus::StronglyStable);
        assert_eq!(v.nice_colors.len(), 12);

        let h = make_h(12, 5, 7).unwrap();
        let v = classify_stability(&h, q("0.5"), q("0.1"), q("0.2"), q("0.2"), NicenessMode::Exhaustive).unwrap();
        assert_eq!(v.status, StabilityStatus::NotStable);
        assert_eq!((v.nice_colors.len(), v.cross_edge_count), (0, 0));

        let n = 16;
        let mut graphs = vec![complete_bipartite_graph(&Bipartition::canonical(n)); 8];
        graphs.extend(vec![complete_bipartite_graph(&evens(n)); 8]);
        let g = GraphCollection::new(n, graphs).unwrap();
        let v = classify_stability(&g, q("0.5"), q("0.1"), q("0.2"), q("0.2"), NicenessMode::Exhaustive).unwrap();
        assert_eq!(v.status, StabilityStatus::WeaklyStable);
        assert_eq!(v.cross_edge_count, 64);
    }

    #[test]
    fn collection_niceness() {
        let k = GraphCollection::uniform(Graph::complete(10), 10).unwrap();
        assert!(is_collection_nice(&k, q("0.01"), NicenessMode::Exhaustive).unwrap().nice);
        let ec1 = make_h(10, 10, 0).unwrap();
        let r = is_collection_nice(&ec1, q("0.01"), NicenessMode::Exhaustive).unwrap();
        let w = r.witness.unwrap();
        assert_eq!((w.failure, w.count), (CollectionNicenessFailure::Cross, 0));
        let ec2 = make_h(10, 0, 10).unwrap();
        let w = is_collection_nice(&ec2, q("0.01"), NicenessMode::Exhaustive).unwrap().witness.unwrap();
        assert_eq!((w.failure, w.count), (CollectionNicenessFailure::Internal, 0));
        let r = is_collection_nice(&make_h(24, 0, 24).unwrap(), q("0.01"), NicenessMode::auto(24)).unwrap();
        assert_eq!(r.witness.unwrap().count, 0);
    }
}

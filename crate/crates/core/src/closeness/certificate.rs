//! Machine-checkable proofs that no transversal Hamilton cycle (or path)
//! exists.
//!
//! A parity certificate fixes a bipartition and tags every colour as
//! `type1` (all edges inside the parts) or `type2` (all edges across). A
//! Hamilton cycle crosses a non-trivial bipartition an even, positive number
//! of times, while a transversal one takes exactly one edge per colour and
//! hence crosses exactly `b` times, `b` being the number of `type2` colours.
//! So `b` odd or `b = 0` rules it out.
//!
//! An independent-set certificate exhibits a set `A` independent in every
//! colour and larger than any Hamilton cycle (or path) can alternate around.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::{BitSet, VertexSet};
use crate::collection::GraphCollection;
use crate::constructions::Bipartition;
use crate::format::{check_version, FormatError, FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorType {
    Type1,
    Type2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonTarget {
    Cycle,
    Path,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCertificate {
    pub partition: Bipartition,
    pub type_of: Vec<ColorType>,
    pub crossing_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentSetCertificate {
    pub a: VertexSet,
    pub target: HamiltonTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    Parity(ParityCertificate),
    IndependentSet(IndependentSetCertificate),
}

impl Certificate {
    /// What the certificate rules out.
    pub fn target(&self) -> HamiltonTarget {
        match self {
            Certificate::Parity(_) => HamiltonTarget::Cycle,
            Certificate::IndependentSet(c) => c.target,
        }
    }
}

/// The invariant a certificate failed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("parity certificates need exactly n colours (n = {n}, colours = {colors})")]
    ColorCount { n: usize, colors: usize },
    #[error("vertex {0} is outside the collection")]
    OutOfRange(usize),
    #[error("partition parts intersect or miss vertices")]
    NotPartition,
    #[error("partition part is empty")]
    EmptyPart,
    #[error("type_of lists {found} colours, expected {expected}")]
    TypeLength { found: usize, expected: usize },
    #[error("colour {color} tagged {tag:?} has an edge ({u},{v}) of the other kind")]
    MixedColor { color: usize, tag: ColorType, u: usize, v: usize },
    #[error("crossing_count is {claimed} but {actual} colours are tagged type2")]
    CountMismatch { claimed: usize, actual: usize },
    #[error("crossing_count {0} is even and non-zero")]
    EvenCrossing(usize),
    #[error("set is not independent: colour {color} has edge ({u},{v})")]
    NotIndependent { color: usize, u: usize, v: usize },
    #[error("set has {size} vertices, need at least {need}")]
    TooSmall { size: usize, need: usize },
}

/// Smallest independent set that cannot fit on a Hamilton cycle or path.
pub fn independent_set_threshold(n: usize, target: HamiltonTarget) -> usize {
    match target {
        HamiltonTarget::Cycle => n / 2 + 1,
        HamiltonTarget::Path => n.div_ceil(2) + 1,
    }
}

fn classify_color(g: &GraphCollection, c: usize, p: &Bipartition) -> Option<Option<ColorType>> {
    let graph = g.graph(c);
    let crossing = graph.edges_between(&p.a, &p.b);
    let internal = graph.edges_within(&p.a) + graph.edges_within(&p.b);
    match (crossing, internal) {
        (0, 0) => Some(None),
        (0, _) => Some(Some(ColorType::Type1)),
        (_, 0) => Some(Some(ColorType::Type2)),
        _ => None,
    }
}

/// Tries to certify `g` against one bipartition.
pub fn parity_certificate_for(g: &GraphCollection, p: &Bipartition) -> Option<ParityCertificate> {
    if g.colors() != g.n() || p.check(g.n()).is_err() || p.a.is_empty() || p.b.is_empty() {
        return None;
    }
    let mut tags = Vec::with_capacity(g.colors());
    for c in 0..g.colors() {
        tags.push(classify_color(g, c, p)?);
    }
    let fixed_type2 = tags.iter().filter(|t| **t == Some(ColorType::Type2)).count();
    // edgeless colours fit either tag; spend one to fix the parity if needed
    let mut flip_one = fixed_type2 > 0 && fixed_type2 % 2 == 0;
    let type_of: Vec<ColorType> = tags
        .into_iter()
        .map(|t| match t {
            Some(t) => t,
            None if flip_one => {
                flip_one = false;
                ColorType::Type2
            }
            None => ColorType::Type1,
        })
        .collect();
    let b = type_of.iter().filter(|&&t| t == ColorType::Type2).count();
    (b % 2 == 1 || b == 0).then(|| ParityCertificate {
        partition: p.clone(),
        type_of,
        crossing_count: b,
    })
}

/// Candidate bipartitions tried by [`parity_certificate`], in order: the
/// canonical equitable split, then for each colour the component of its
/// lowest vertex (when disconnected) or its two-colouring (when connected and
/// bipartite).
pub fn parity_candidates(g: &GraphCollection) -> Vec<Bipartition> {
    let n = g.n();
    let mut out: Vec<Bipartition> = Vec::new();
    let mut push = |p: Bipartition| {
        if !p.a.is_empty() && !p.b.is_empty() && !out.iter().any(|q| q.a == p.a || q.a == p.b) {
            out.push(p);
        }
    };
    push(Bipartition::canonical(n));
    push(Bipartition::with_first_part(n, n / 2));
    for graph in g.graphs() {
        let mut side = vec![None::<bool>; n];
        let mut bipartite = true;
        side[0] = Some(true);
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            let sv = side[v].expect("visited");
            for w in graph.neighbors(v) {
                match side[w] {
                    None => {
                        side[w] = Some(!sv);
                        stack.push(w);
                    }
                    Some(sw) if sw == sv => bipartite = false,
                    _ => {}
                }
            }
        }
        let component = BitSet::from_members(n, (0..n).filter(|&v| side[v].is_some()));
        if component.len() < n {
            push(Bipartition::from_part(component));
        } else if bipartite {
            push(Bipartition::from_part(BitSet::from_members(
                n,
                (0..n).filter(|&v| side[v] == Some(true)),
            )));
        }
    }
    out
}

/// With a supplied partition, verifies it; otherwise searches the fixed
/// candidate list of [`parity_candidates`].
pub fn parity_certificate(
    g: &GraphCollection,
    partition: Option<&Bipartition>,
) -> Result<Option<ParityCertificate>, CertificateError> {
    if g.colors() != g.n() {
        return Err(CertificateError::ColorCount { n: g.n(), colors: g.colors() });
    }
    Ok(match partition {
        Some(p) => parity_certificate_for(g, p),
        None => parity_candidates(g).iter().find_map(|p| parity_certificate_for(g, p)),
    })
}

/// Certificate iff `a` is independent in every colour and large enough.
pub fn independent_set_certificate(
    g: &GraphCollection,
    a: &VertexSet,
    target: HamiltonTarget,
) -> Option<IndependentSetCertificate> {
    let cert = IndependentSetCertificate { a: a.clone(), target };
    verify_independent_set(g, &cert).ok().map(|_| cert)
}

/// Searches for a maximum common independent set and returns a certificate
/// when it clears the threshold. Exact; intended for `n <= 64`.
pub fn find_independent_set_certificate(
    g: &GraphCollection,
    target: HamiltonTarget,
) -> Option<IndependentSetCertificate> {
    let n = g.n();
    if n > 64 {
        return None;
    }
    let union = g.union_graph();
    let adj: Vec<u64> = (0..n).map(|v| union.row_mask(v)).collect();
    let all = crate::bitset::low_mask(n);
    let mut best = 0u64;
    max_independent(&adj, all, 0, &mut best);
    let set = BitSet::from_mask(n, best);
    independent_set_certificate(g, &set, target)
}

fn max_independent(adj: &[u64], candidates: u64, current: u64, best: &mut u64) {
    if candidates == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    if current.count_ones() + candidates.count_ones() <= best.count_ones() {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    let bit = 1u64 << v;
    max_independent(adj, candidates & !bit & !adj[v], current | bit, best);
    // skipping v only helps if some neighbour can then be taken
    if adj[v] & candidates != 0 {
        max_independent(adj, candidates & !bit, current, best);
    }
}

pub fn verify_certificate(g: &GraphCollection, cert: &Certificate) -> Result<(), CertificateError> {
    match cert {
        Certificate::Parity(c) => verify_parity(g, c),
        Certificate::IndependentSet(c) => verify_independent_set(g, c),
    }
}

fn rehome(set: &VertexSet, n: usize) -> Result<VertexSet, CertificateError> {
    set.rehome(n).map_err(CertificateError::OutOfRange)
}

fn verify_parity(g: &GraphCollection, cert: &ParityCertificate) -> Result<(), CertificateError> {
    let n = g.n();
    if g.colors() != n {
        return Err(CertificateError::ColorCount { n, colors: g.colors() });
    }
    let p = Bipartition {
        a: rehome(&cert.partition.a, n)?,
        b: rehome(&cert.partition.b, n)?,
    };
    if !p.a.is_disjoint(&p.b) || p.a.len() + p.b.len() != n {
        return Err(CertificateError::NotPartition);
    }
    if p.a.is_empty() || p.b.is_empty() {
        return Err(CertificateError::EmptyPart);
    }
    if cert.type_of.len() != g.colors() {
        return Err(CertificateError::TypeLength { found: cert.type_of.len(), expected: g.colors() });
    }
    for (c, &tag) in cert.type_of.iter().enumerate() {
        let crossing_expected = tag == ColorType::Type2;
        if let Some((u, v)) = g
            .graph(c)
            .edges()
            .find(|&(u, v)| (p.side_of(u) != p.side_of(v)) != crossing_expected)
        {
            return Err(CertificateError::MixedColor { color: c, tag, u, v });
        }
    }
    let actual = cert.type_of.iter().filter(|&&t| t == ColorType::Type2).count();
    if actual != cert.crossing_count {
        return Err(CertificateError::CountMismatch { claimed: cert.crossing_count, actual });
    }
    if actual != 0 && actual % 2 == 0 {
        return Err(CertificateError::EvenCrossing(actual));
    }
    Ok(())
}

fn verify_independent_set(g: &GraphCollection, cert: &IndependentSetCertificate) -> Result<(), CertificateError> {
    let a = rehome(&cert.a, g.n())?;
    for (c, graph) in g.graphs().iter().enumerate() {
        for u in a.iter() {
            if let Some(v) = graph.neighbors(u).find(|&v| a.contains(v)) {
                return Err(CertificateError::NotIndependent { color: c, u: u.min(v), v: u.max(v) });
            }
        }
    }
    let need = independent_set_threshold(g.n(), cert.target);
    if a.len() < need {
        return Err(CertificateError::TooSmall { size: a.len(), need });
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    version: u32,
    #[serde(flatten)]
    certificate: Certificate,
}

pub fn certificate_to_json(cert: &Certificate) -> String {
    serde_json::to_string(&CertificateFile {
        version: FORMAT_VERSION,
        certificate: cert.clone(),
    })
    .expect("certificate serialises")
}

pub fn certificate_from_json(text: &str) -> Result<Certificate, FormatError> {
    let file: CertificateFile = serde_json::from_str(text)?;
    check_version(file.version)?;
    Ok(file.certificate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::Graph;
    use crate::constructions::{make_h, make_half_split, make_half_split_with_part, BInternal};

    #[test]
    fn h_family_parity_examples() {
        let cert = parity_certificate(&make_h(6, 5, 1).unwrap(), None).unwrap().unwrap();
        assert_eq!(cert.crossing_count, 1);
        let cert = parity_certificate(&make_h(8, 8, 0).unwrap(), None).unwrap().unwrap();
        assert_eq!(cert.crossing_count, 0);
        assert_eq!(parity_certificate(&make_h(6, 0, 6).unwrap(), None).unwrap(), None);
        assert!(matches!(
            parity_certificate(&make_h(6, 2, 2).unwrap(), None),
            Err(CertificateError::ColorCount { .. })
        ));
    }

    #[test]
    fn emitted_certificates_verify() {
        for n in 3..=10 {
            for a in 0..=n {
                let g = make_h(n, a, n - a).unwrap();
                if let Some(c) = parity_certificate(&g, None).unwrap() {
                    assert_eq!(verify_certificate(&g, &Certificate::Parity(c)), Ok(()));
                }
            }
        }
    }

    #[test]
    fn mixed_color_fails_verification() {
        let g = make_h(6, 5, 1).unwrap();
        let mut cert = parity_certificate(&g, None).unwrap().unwrap();
        cert.type_of[0] = ColorType::Type2;
        cert.crossing_count = 2;
        assert!(matches!(
            verify_certificate(&g, &Certificate::Parity(cert)),
            Err(CertificateError::MixedColor { color: 0, .. })
        ));
    }

    #[test]
    fn independent_set_examples() {
        let g = make_half_split(7, 7, BInternal::Complete).unwrap();
        let a = BitSet::from_members(7, 0..4);
        assert!(independent_set_certificate(&g, &a, HamiltonTarget::Cycle).is_some());
        let k = GraphCollection::uniform(Graph::complete(6), 6).unwrap();
        assert!(independent_set_certificate(&k, &BitSet::from_members(6, [0, 1]), HamiltonTarget::Cycle).is_none());
        let g = make_half_split_with_part(7, 6, 5, BInternal::Complete).unwrap();
        let a = BitSet::from_members(7, 0..5);
        assert!(independent_set_certificate(&g, &a, HamiltonTarget::Path).is_some());
        let found = find_independent_set_certificate(&g, HamiltonTarget::Path).unwrap();
        assert_eq!(found.a, a);
    }

    #[test]
    fn json_round_trip() {
        let g = make_h(6, 5, 1).unwrap();
        let cert = Certificate::Parity(parity_certificate(&g, None).unwrap().unwrap());
        let text = certificate_to_json(&cert);
        assert!(text.starts_with(r#"{"version":1,"type":"parity""#), "{text}");
        let back = certificate_from_json(&text).unwrap();
        assert_eq!(verify_certificate(&g, &back), Ok(()));
    }
}

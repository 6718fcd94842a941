//! JSON interchange formats.
//!
//! Collections are stored as
//! `{"version": 1, "n": <int>, "graphs": [[[u, v], ...], ...]}` where
//! `graphs[c]` lists each undirected edge of colour `c` once with `u < v`.
//! Witnesses are `{"version": 1, "kind": "...", "edges": [[u, v, c], ...]}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::collection::{CollectionError, GraphCollection};
use crate::transversal::{SubgraphKind, TransversalEdge, TransversalSubgraph};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {found} (expected {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("{0}")]
    Collection(#[from] CollectionError),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CollectionFile {
    version: u32,
    n: usize,
    graphs: Vec<Vec<[usize; 2]>>,
}

pub fn collection_to_json(g: &GraphCollection) -> String {
    let file = CollectionFile {
        version: FORMAT_VERSION,
        n: g.n(),
        graphs: g
            .graphs()
            .iter()
            .map(|graph| graph.edges().map(|(u, v)| [u, v]).collect())
            .collect(),
    };
    serde_json::to_string(&file).expect("collection serialises")
}

pub fn collection_from_json(text: &str) -> Result<GraphCollection, FormatError> {
    let file: CollectionFile = serde_json::from_str(text)?;
    check_version(file.version)?;
    let lists: Vec<Vec<(usize, usize)>> = file
        .graphs
        .iter()
        .map(|edges| edges.iter().map(|&[u, v]| (u, v)).collect())
        .collect();
    Ok(GraphCollection::from_edge_lists(file.n, &lists)?)
}

pub(crate) fn check_version(found: u32) -> Result<(), FormatError> {
    if found == FORMAT_VERSION {
        Ok(())
    } else {
        Err(FormatError::Version { found })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessFile {
    version: u32,
    kind: SubgraphKind,
    edges: Vec<TransversalEdge>,
}

pub fn witness_to_json(t: &TransversalSubgraph) -> String {
    serde_json::to_string(&WitnessFile {
        version: FORMAT_VERSION,
        kind: t.kind,
        edges: t.edges.clone(),
    })
    .expect("witness serialises")
}

pub fn witness_from_json(text: &str) -> Result<TransversalSubgraph, FormatError> {
    let file: WitnessFile = serde_json::from_str(text)?;
    check_version(file.version)?;
    Ok(TransversalSubgraph::new(file.kind, file.edges))
}

//! Burst counts become edge weights; weights become the adjacency matrix.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, SocialGraph, WeightedAdjacency};
use crate::text::BurstSet;

/// One edge's weight: the number of burst words found on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeWeight {
    pub edge: EdgeKey,
    pub w: u64,
}

/// The weight of a burst set is its cardinality.
pub fn edge_weight(b: &BurstSet) -> EdgeWeight {
    let edge = EdgeKey::new(b.edge.0.clone(), b.edge.1.clone())
        .expect("burst set endpoints are a valid edge");
    EdgeWeight {
        edge,
        w: b.words.len() as u64,
    }
}

/// Assembles the symmetric weight matrix over the graph's vertices sorted
/// by id. Pairs without a weight entry are zero; zero-weight entries keep
/// their slot so the matrix shape is stable.
pub fn build_adjacency(graph: &SocialGraph, weights: &[EdgeWeight]) -> Result<WeightedAdjacency> {
    let order: Vec<_> = graph.vertex_ids().cloned().collect();
    let index: BTreeMap<_, usize> = order
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), i))
        .collect();
    let mut matrix = vec![vec![0u64; order.len()]; order.len()];
    let mut seen: BTreeMap<EdgeKey, ()> = BTreeMap::new();
    for entry in weights {
        let key = &entry.edge;
        if graph.edge(key).is_none() {
            return Err(Error::WeightOnMissingEdge(
                key.u().to_string(),
                key.v().to_string(),
            ));
        }
        if seen.insert(key.clone(), ()).is_some() {
            return Err(Error::DuplicateWeight(
                key.u().to_string(),
                key.v().to_string(),
            ));
        }
        let i = index[key.u()];
        let j = index[key.v()];
        matrix[i][j] = entry.w;
        matrix[j][i] = entry.w;
    }
    WeightedAdjacency::new(order, matrix)
}

//! Shared fixtures for unit tests.

use crate::graph::{VertexId, WeightedAdjacency};

pub(crate) const FIXTURE_ENTRIES: [(&str, &str, u64); 17] = [
    ("A", "B", 17),
    ("A", "D", 9),
    ("B", "C", 21),
    ("B", "D", 8),
    ("B", "E", 14),
    ("C", "F", 29),
    ("C", "G", 6),
    ("D", "E", 0),
    ("E", "F", 19),
    ("E", "I", 0),
    ("F", "G", 15),
    ("F", "H", 8),
    ("F", "I", 25),
    ("G", "H", 9),
    ("F", "J", 8),
    ("J", "K", 0),
    ("I", "K", 25),
];

/// The canonical eleven-vertex weight fixture used across the crate's tests.
pub(crate) fn fixture_adjacency() -> WeightedAdjacency {
    let order: Vec<VertexId> = "ABCDEFGHIJK"
        .chars()
        .map(|c| VertexId::new(c.to_string()).unwrap())
        .collect();
    let mut weights = vec![vec![0u64; order.len()]; order.len()];
    for (a, b, w) in FIXTURE_ENTRIES {
        let i = order.iter().position(|v| v.as_str() == a).unwrap();
        let j = order.iter().position(|v| v.as_str() == b).unwrap();
        weights[i][j] = w;
        weights[j][i] = w;
    }
    WeightedAdjacency::new(order, weights).unwrap()
}

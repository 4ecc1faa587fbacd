//! Weighted shortest-path betweenness over the adjacency matrix.
//!
//! Edge length is the reciprocal of its weight, so heavier ties are
//! shorter; zero-weight edges are not traversable. Path lengths are exact
//! rationals, so equal-length ties are detected exactly. Credit for each
//! unordered source-target pair is split equally among its shortest paths;
//! endpoints receive no vertex credit for their own pair.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::graph::{EdgeKey, VertexId, WeightedAdjacency};

/// Raw (unnormalized) betweenness scores. Every vertex of the matrix has a
/// vertex score (isolated vertices score zero); every positive-weight edge
/// has an edge score.
#[derive(Debug, Clone, PartialEq)]
pub struct BetweennessScores {
    pub vertex_scores: BTreeMap<VertexId, f64>,
    pub edge_scores: BTreeMap<EdgeKey, f64>,
}

/// Brandes' accumulation with Dijkstra over reciprocal-weight lengths.
pub fn betweenness(adjacency: &WeightedAdjacency) -> BetweennessScores {
    let n = adjacency.len();
    let order = adjacency.order();

    let mut neighbors: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in 0..n {
            let w = adjacency.weight_at(i, j);
            if w > 0 {
                neighbors[i].push((j, BigRational::new(BigInt::from(1), BigInt::from(w))));
            }
        }
    }

    let mut vertex_acc = vec![0.0f64; n];
    let mut edge_acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if adjacency.weight_at(i, j) > 0 {
                edge_acc.insert((i, j), 0.0);
            }
        }
    }

    for source in 0..n {
        let mut dist: Vec<Option<BigRational>> = vec![None; n];
        let mut sigma = vec![0.0f64; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut settled = vec![false; n];
        let mut finish_order = Vec::with_capacity(n);
        let mut heap = BinaryHeap::new();

        dist[source] = Some(BigRational::from(BigInt::from(0)));
        sigma[source] = 1.0;
        heap.push(Reverse((BigRational::from(BigInt::from(0)), source)));

        while let Some(Reverse((d, v))) = heap.pop() {
            if settled[v] || dist[v].as_ref() != Some(&d) {
                continue;
            }
            settled[v] = true;
            finish_order.push(v);
            for (w, len) in &neighbors[v] {
                if settled[*w] {
                    continue;
                }
                let candidate = &d + len;
                match &dist[*w] {
                    Some(current) if candidate > *current => {}
                    Some(current) if candidate == *current => {
                        sigma[*w] += sigma[v];
                        preds[*w].push(v);
                    }
                    _ => {
                        dist[*w] = Some(candidate.clone());
                        sigma[*w] = sigma[v];
                        preds[*w] = vec![v];
                        heap.push(Reverse((candidate, *w)));
                    }
                }
            }
        }

        let mut delta = vec![0.0f64; n];
        for &w in finish_order.iter().rev() {
            for &v in &preds[w] {
                let credit = sigma[v] / sigma[w] * (1.0 + delta[w]);
                let key = if v < w { (v, w) } else { (w, v) };
                *edge_acc.entry(key).or_insert(0.0) += credit;
                delta[v] += credit;
            }
            if w != source {
                vertex_acc[w] += delta[w];
            }
        }
    }

    // Every unordered pair was visited from both endpoints.
    let vertex_scores = order
        .iter()
        .enumerate()
        .map(|(i, id)| (id.clone(), vertex_acc[i] / 2.0))
        .collect();
    let edge_scores = edge_acc
        .into_iter()
        .map(|((i, j), score)| {
            let key = EdgeKey::new(order[i].clone(), order[j].clone())
                .expect("matrix order entries are distinct");
            (key, score / 2.0)
        })
        .collect();
    BetweennessScores {
        vertex_scores,
        edge_scores,
    }
}

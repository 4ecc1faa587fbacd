//! Threshold filtering and community assembly: per-key burst extraction
//! drives edge weights, the threshold keeps the strong part of the graph,
//! and its connected components are the communities.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::centrality::{betweenness, BetweennessScores};
use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeKey, SocialGraph, Vertex, VertexId, WeightedAdjacency};
use crate::text::{extract_burst_words, key_profile, ContextKey, TimeBinConfig};
use crate::weighting::{build_adjacency, EdgeWeight};

pub const DEFAULT_RHO_MIN: f64 = 0.7;
pub const DEFAULT_BETA: f64 = 3.0;
pub const DEFAULT_BIN_WIDTH: i64 = 86_400;

/// Which quantity the threshold is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectionMode {
    Weight,
    VertexBetweenness,
}

/// Full parameterization of a detection run.
#[derive(Debug, Clone)]
pub struct DetectionConfig {
    pub keys: Vec<ContextKey>,
    pub lambda: f64,
    pub mode: DetectionMode,
    pub rho_min: f64,
    pub beta: f64,
    pub bins: TimeBinConfig,
}

impl DetectionConfig {
    pub fn new(keys: Vec<ContextKey>, lambda: f64, bins: TimeBinConfig) -> Self {
        DetectionConfig {
            keys,
            lambda,
            mode: DetectionMode::Weight,
            rho_min: DEFAULT_RHO_MIN,
            beta: DEFAULT_BETA,
            bins,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.keys.is_empty() {
            return Err(Error::NoKeys);
        }
        if !self.lambda.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "lambda must be finite, got {}",
                self.lambda
            )));
        }
        if !(self.rho_min > 0.0 && self.rho_min <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "rho_min must be in (0, 1], got {}",
                self.rho_min
            )));
        }
        if !(self.beta > 1.0) {
            return Err(Error::InvalidConfig(format!(
                "beta must be greater than 1, got {}",
                self.beta
            )));
        }
        TimeBinConfig::new(self.bins.origin, self.bins.bin_width, self.bins.bin_count)?;
        Ok(())
    }
}

/// One edge of a detected community with its weight and burst words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityEdge {
    pub source: VertexId,
    pub target: VertexId,
    pub weight: u64,
    pub burst_words: BTreeSet<String>,
}

/// A connected group of users tied by the same event.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Community {
    pub id: usize,
    pub vertices: BTreeSet<VertexId>,
    pub edges: Vec<CommunityEdge>,
}

/// Echo of the parameters a result was produced with. Text-pipeline runs
/// fill every field; matrix-input runs have no keys and no text settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub keys: Vec<String>,
    pub lambda: f64,
    pub mode: DetectionMode,
    pub rho_min: Option<f64>,
    pub beta: Option<f64>,
    pub bins: Option<TimeBinConfig>,
}

/// The detection output: disjoint communities plus the full weight matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub config: ConfigEcho,
    pub communities: Vec<Community>,
    pub matrix: WeightedAdjacency,
}

impl DetectionResult {
    pub fn community_count(&self) -> usize {
        self.communities.len()
    }
}

/// Edges whose weight is strictly greater than `lambda`. Zero-weight
/// entries are never selected, whatever the threshold.
pub fn filter_edges_by_weight(adjacency: &WeightedAdjacency, lambda: f64) -> BTreeSet<EdgeKey> {
    adjacency
        .positive_edges()
        .into_iter()
        .filter(|(_, w)| (*w as f64) > lambda)
        .map(|(key, _)| key)
        .collect()
}

/// Vertices whose betweenness score is strictly greater than `lambda`.
pub fn filter_vertices_by_betweenness(
    _adjacency: &WeightedAdjacency,
    scores: &BetweennessScores,
    lambda: f64,
) -> BTreeSet<VertexId> {
    scores
        .vertex_scores
        .iter()
        .filter(|(_, score)| **score > lambda)
        .map(|(id, _)| id.clone())
        .collect()
}

/// Runs the full pipeline on a text graph: per-key burst extraction on
/// every edge, summed weights, threshold filtering, and component
/// assembly.
pub fn detect(graph: &SocialGraph, config: &DetectionConfig) -> Result<DetectionResult> {
    config.validate()?;

    let echo = ConfigEcho {
        keys: config.keys.iter().map(|k| k.text().to_string()).collect(),
        lambda: config.lambda,
        mode: config.mode,
        rho_min: Some(config.rho_min),
        beta: Some(config.beta),
        bins: Some(config.bins),
    };

    // Nothing to cluster: an edgeless graph short-circuits before the
    // corpus key check, which would otherwise have nothing to find.
    if graph.edges().next().is_none() {
        return Ok(DetectionResult {
            config: echo,
            communities: Vec::new(),
            matrix: build_adjacency(graph, &[])?,
        });
    }

    let mut weights: BTreeMap<EdgeKey, u64> = BTreeMap::new();
    let mut words: BTreeMap<EdgeKey, BTreeSet<String>> = BTreeMap::new();
    for key in &config.keys {
        let profile = key_profile(graph, key, &config.bins)?;
        for edge in graph.edges() {
            let burst = extract_burst_words(edge, &profile, &config.bins, config.rho_min, config.beta);
            *weights.entry(edge.key().clone()).or_insert(0) += burst.words.len() as u64;
            words
                .entry(edge.key().clone())
                .or_default()
                .extend(burst.words);
        }
    }

    let edge_weights: Vec<EdgeWeight> = weights
        .iter()
        .map(|(key, w)| EdgeWeight {
            edge: key.clone(),
            w: *w,
        })
        .collect();
    let adjacency = build_adjacency(graph, &edge_weights)?;
    let communities = assemble(&adjacency, config.lambda, config.mode, &words);
    Ok(DetectionResult {
        config: echo,
        communities,
        matrix: adjacency,
    })
}

/// Detection from a precomputed weight matrix: positive entries are the
/// edges, so the worked example is reproducible without any text.
pub fn detect_from_matrix(
    adjacency: &WeightedAdjacency,
    lambda: f64,
    mode: DetectionMode,
) -> Result<DetectionResult> {
    if !lambda.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "lambda must be finite, got {lambda}"
        )));
    }
    let echo = ConfigEcho {
        keys: Vec::new(),
        lambda,
        mode,
        rho_min: None,
        beta: None,
        bins: None,
    };
    let communities = assemble(adjacency, lambda, mode, &BTreeMap::new());
    Ok(DetectionResult {
        config: echo,
        communities,
        matrix: adjacency.clone(),
    })
}

fn assemble(
    adjacency: &WeightedAdjacency,
    lambda: f64,
    mode: DetectionMode,
    burst_words: &BTreeMap<EdgeKey, BTreeSet<String>>,
) -> Vec<Community> {
    let positive = adjacency.positive_edges();
    let (member_vertices, member_edges): (BTreeSet<VertexId>, Vec<(EdgeKey, u64)>) = match mode {
        DetectionMode::Weight => {
            let kept = filter_edges_by_weight(adjacency, lambda);
            let edges: Vec<(EdgeKey, u64)> = positive
                .into_iter()
                .filter(|(key, _)| kept.contains(key))
                .collect();
            let vertices = edges
                .iter()
                .flat_map(|(key, _)| [key.u().clone(), key.v().clone()])
                .collect();
            (vertices, edges)
        }
        DetectionMode::VertexBetweenness => {
            let scores = betweenness(adjacency);
            let selected = filter_vertices_by_betweenness(adjacency, &scores, lambda);
            let edges = positive
                .into_iter()
                .filter(|(key, _)| selected.contains(key.u()) && selected.contains(key.v()))
                .collect();
            (selected, edges)
        }
    };

    let components = components_of(&member_vertices, &member_edges);
    components
        .into_iter()
        .enumerate()
        .map(|(id, vertices)| {
            let edges = member_edges
                .iter()
                .filter(|(key, _)| vertices.contains(key.u()))
                .map(|(key, w)| CommunityEdge {
                    source: key.u().clone(),
                    target: key.v().clone(),
                    weight: *w,
                    burst_words: burst_words.get(key).cloned().unwrap_or_default(),
                })
                .collect();
            Community {
                id,
                vertices,
                edges,
            }
        })
        .collect()
}

/// Connected components over an explicit vertex set: vertices without a
/// qualifying incident edge become singletons.
fn components_of(
    vertices: &BTreeSet<VertexId>,
    edges: &[(EdgeKey, u64)],
) -> Vec<BTreeSet<VertexId>> {
    let graph = SocialGraph::new(
        vertices.iter().map(|id| Vertex::new(id.clone())).collect(),
        edges
            .iter()
            .map(|(key, _)| {
                Edge::new(key.u().clone(), key.v().clone(), Vec::new())
                    .expect("edge keys are valid edges")
            })
            .collect(),
    )
    .expect("component graph is consistent by construction");
    graph.connected_components()
}

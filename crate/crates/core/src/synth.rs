//! Deterministic synthetic social graphs with planted communities and a
//! planted burst event, plus recovery metrics against the known truth.
//!
//! Randomness comes from ChaCha8 seeded with the 64-bit `seed` field, so a
//! given parameter set always yields the same graph.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::community::DetectionResult;
use crate::error::{Error, Result};
use crate::graph::{Edge, Interaction, InteractionKind, SocialGraph, Vertex, VertexId};
use crate::text::{tokenize, TimeBinConfig};

/// Generator parameters. `event_window` is a half-open bin range
/// [start, end) inside the horizon; rates are words per interaction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub n_vertices: usize,
    pub k_communities: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub vocab_size: usize,
    pub background_rate: u32,
    pub event_window: (usize, usize),
    pub burst_vocab: Vec<String>,
    pub burst_rate: u32,
    pub bin_count: usize,
    pub bin_width: i64,
    #[serde(default)]
    pub seed: u64,
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_vertices == 0 {
            return Err(Error::InvalidParams("n_vertices must be positive".into()));
        }
        if self.k_communities == 0 || self.k_communities > self.n_vertices {
            return Err(Error::InvalidParams(format!(
                "k_communities must be in 1..={}, got {}",
                self.n_vertices, self.k_communities
            )));
        }
        if !(0.0..=1.0).contains(&self.p_in) || !(0.0..=1.0).contains(&self.p_out) {
            return Err(Error::InvalidParams(
                "edge probabilities must lie in [0, 1]".into(),
            ));
        }
        if !(self.p_out < self.p_in) {
            return Err(Error::InvalidParams(format!(
                "p_out must be strictly below p_in, got {} vs {}",
                self.p_out, self.p_in
            )));
        }
        if self.vocab_size == 0 {
            return Err(Error::InvalidParams("vocab_size must be positive".into()));
        }
        let (start, end) = self.event_window;
        if start > end || end > self.bin_count {
            return Err(Error::InvalidParams(format!(
                "event_window [{start}, {end}) must lie within the {} bins",
                self.bin_count
            )));
        }
        if self.burst_rate > 0 {
            if self.burst_vocab.is_empty() {
                return Err(Error::InvalidParams(
                    "burst_rate is positive but burst_vocab is empty".into(),
                ));
            }
            if start == end {
                return Err(Error::InvalidParams(
                    "burst_rate is positive but event_window is empty".into(),
                ));
            }
        }
        for word in &self.burst_vocab {
            let tokens = tokenize(word);
            if tokens.len() != 1 || tokens[0] != *word {
                return Err(Error::InvalidParams(format!(
                    "burst word {word:?} does not survive tokenization"
                )));
            }
        }
        TimeBinConfig::new(0, self.bin_width, self.bin_count)?;
        Ok(())
    }

    /// The binning that covers exactly the generated horizon.
    pub fn bins(&self) -> TimeBinConfig {
        TimeBinConfig::new(0, self.bin_width, self.bin_count)
            .expect("validated params produce valid bins")
    }
}

/// What the generator planted: the community of every vertex, which
/// community bursts, and the burst vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub assignment: BTreeMap<VertexId, usize>,
    pub burst_community: usize,
    pub burst_words: Vec<String>,
}

impl GroundTruth {
    /// Vertex sets per community index.
    pub fn communities(&self) -> Vec<std::collections::BTreeSet<VertexId>> {
        let k = self.assignment.values().copied().max().map_or(0, |m| m + 1);
        let mut sets = vec![std::collections::BTreeSet::new(); k];
        for (id, community) in &self.assignment {
            sets[*community].insert(id.clone());
        }
        sets
    }
}

fn vertex_name(index: usize, n: usize) -> String {
    let width = (n.saturating_sub(1)).to_string().len();
    format!("u{index:0width$}")
}

/// Generates a planted-partition graph. Every edge receives interactions
/// with timestamps uniform over the horizon whose texts draw
/// `background_rate` background words; edges internal to community zero
/// additionally draw `burst_rate` burst words while the timestamp falls in
/// the event window.
pub fn generate(params: &SynthParams) -> Result<(SocialGraph, GroundTruth)> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let bins = params.bins();

    let n = params.n_vertices;
    let k = params.k_communities;
    let ids: Vec<VertexId> = (0..n)
        .map(|i| VertexId::new(vertex_name(i, n)).expect("generated ids are valid"))
        .collect();

    // Contiguous blocks; remainders go to the first communities.
    let base = n / k;
    let remainder = n % k;
    let mut assignment_by_index = Vec::with_capacity(n);
    for community in 0..k {
        let size = base + usize::from(community < remainder);
        assignment_by_index.extend(std::iter::repeat(community).take(size));
    }

    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let p = if assignment_by_index[i] == assignment_by_index[j] {
                params.p_in
            } else {
                params.p_out
            };
            if rng.random_bool(p) {
                pairs.push((i, j));
            }
        }
    }

    let horizon = bins.bin_width * bins.bin_count as i64;
    let interactions_per_edge = 2 * bins.bin_count;
    let kinds = [
        InteractionKind::Comment,
        InteractionKind::Message,
        InteractionKind::Post,
    ];
    let (window_start, window_end) = params.event_window;

    let mut edges = Vec::with_capacity(pairs.len());
    for (i, j) in pairs {
        let internal_burst =
            assignment_by_index[i] == 0 && assignment_by_index[j] == 0 && params.burst_rate > 0;
        let mut interactions = Vec::with_capacity(interactions_per_edge);
        for seq in 0..interactions_per_edge {
            let timestamp = rng.random_range(0..horizon);
            let mut words = Vec::new();
            for _ in 0..params.background_rate {
                let w = rng.random_range(0..params.vocab_size);
                words.push(format!("bg{w:04}"));
            }
            if internal_burst {
                let bin = bins.bin_of(timestamp).expect("timestamp is inside horizon");
                if bin >= window_start && bin < window_end {
                    for _ in 0..params.burst_rate {
                        let w = rng.random_range(0..params.burst_vocab.len());
                        words.push(params.burst_vocab[w].clone());
                    }
                }
            }
            interactions.push(Interaction::new(
                kinds[seq % kinds.len()],
                words.join(" "),
                timestamp,
            )?);
        }
        interactions.sort_by_key(|i| i.timestamp);
        edges.push(Edge::new(ids[i].clone(), ids[j].clone(), interactions)?);
    }

    let graph = SocialGraph::new(ids.iter().map(|id| Vertex::new(id.clone())).collect(), edges)?;
    let truth = GroundTruth {
        assignment: ids
            .into_iter()
            .zip(assignment_by_index)
            .collect(),
        burst_community: 0,
        burst_words: params.burst_vocab.clone(),
    };
    Ok((graph, truth))
}

/// Vertex-membership metrics for one planted community against its
/// best-matching detection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommunityMetrics {
    pub truth_index: usize,
    pub matched: Option<usize>,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub jaccard: f64,
}

/// Metrics for every planted community, matched by maximum Jaccard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_community: Vec<CommunityMetrics>,
    pub burst_community: usize,
}

impl EvalReport {
    /// The planted burst community's F1.
    pub fn burst_f1(&self) -> f64 {
        self.per_community
            .iter()
            .find(|m| m.truth_index == self.burst_community)
            .map_or(0.0, |m| m.f1)
    }
}

/// Scores detected communities against the planted assignment: each truth
/// community is matched to the detected community of maximum Jaccard
/// overlap, then precision, recall, F1, and Jaccard are computed on vertex
/// membership.
pub fn evaluate(detected: &DetectionResult, truth: &GroundTruth) -> EvalReport {
    let truth_sets = truth.communities();
    let mut per_community = Vec::with_capacity(truth_sets.len());
    for (truth_index, truth_set) in truth_sets.iter().enumerate() {
        let mut best: Option<(usize, f64, usize, usize)> = None; // (id, jaccard, inter, detected size)
        for community in &detected.communities {
            let inter = community.vertices.intersection(truth_set).count();
            let union = community.vertices.len() + truth_set.len() - inter;
            let jaccard = if union == 0 {
                0.0
            } else {
                inter as f64 / union as f64
            };
            let better = match &best {
                Some((_, best_j, _, _)) => jaccard > *best_j,
                None => true,
            };
            if better {
                best = Some((community.id, jaccard, inter, community.vertices.len()));
            }
        }
        let metrics = match best {
            Some((id, jaccard, inter, detected_size)) if jaccard > 0.0 => {
                let precision = inter as f64 / detected_size as f64;
                let recall = inter as f64 / truth_set.len() as f64;
                let f1 = if precision + recall > 0.0 {
                    2.0 * precision * recall / (precision + recall)
                } else {
                    0.0
                };
                CommunityMetrics {
                    truth_index,
                    matched: Some(id),
                    precision,
                    recall,
                    f1,
                    jaccard,
                }
            }
            _ => CommunityMetrics {
                truth_index,
                matched: None,
                precision: 0.0,
                recall: 0.0,
                f1: 0.0,
                jaccard: 0.0,
            },
        };
        per_community.push(metrics);
    }
    EvalReport {
        per_community,
        burst_community: truth.burst_community,
    }
}

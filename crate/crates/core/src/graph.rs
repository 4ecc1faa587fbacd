//! Graph data model: vertices with profile attributes, undirected edges
//! carrying timestamped interactions, subgraph induction, connected
//! components, and the weighted adjacency matrix with tie-strength
//! normalization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque vertex identifier. Non-empty; commas and control characters are
/// rejected so identifiers are safe in every export format.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VertexId(String);

impl VertexId {
    pub fn new(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        if value.is_empty() {
            return Err(Error::EmptyVertexId);
        }
        if value.chars().any(|c| c == ',' || c.is_control()) {
            return Err(Error::InvalidVertexId(value));
        }
        Ok(VertexId(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for VertexId {
    type Error = Error;
    fn try_from(value: String) -> Result<Self> {
        VertexId::new(value)
    }
}

impl From<VertexId> for String {
    fn from(id: VertexId) -> String {
        id.0
    }
}

/// A user: identifier plus optional profile attributes (name, gender,
/// hometown, locale, email, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub attributes: BTreeMap<String, String>,
}

impl Vertex {
    pub fn new(id: VertexId) -> Self {
        Vertex {
            id,
            attributes: BTreeMap::new(),
        }
    }

    pub fn with_attributes(id: VertexId, attributes: BTreeMap<String, String>) -> Self {
        Vertex { id, attributes }
    }
}

/// What kind of tie event an interaction records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionKind {
    Like,
    Comment,
    Share,
    Tag,
    Post,
    Message,
}

/// One timestamped event on an edge. `text` may be empty (a bare like).
/// Timestamps are UTC seconds since the epoch and must be non-negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interaction {
    pub kind: InteractionKind,
    pub text: String,
    pub timestamp: i64,
}

/// 9999-12-31T23:59:59Z, the last second renderable with a four-digit year.
const MAX_TIMESTAMP: i64 = 253_402_300_799;

impl Interaction {
    pub fn new(kind: InteractionKind, text: impl Into<String>, timestamp: i64) -> Result<Self> {
        if timestamp < 0 {
            return Err(Error::NegativeTimestamp(timestamp));
        }
        if timestamp > MAX_TIMESTAMP {
            return Err(Error::TimestampOutOfRange(timestamp));
        }
        Ok(Interaction {
            kind,
            text: text.into(),
            timestamp,
        })
    }
}

/// Canonical unordered vertex pair: the smaller id is always first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(VertexId, VertexId);

impl EdgeKey {
    /// Orders the endpoints; self-pairs are rejected.
    pub fn new(a: VertexId, b: VertexId) -> Result<Self> {
        if a == b {
            return Err(Error::SelfLoop(a.to_string()));
        }
        if a < b {
            Ok(EdgeKey(a, b))
        } else {
            Ok(EdgeKey(b, a))
        }
    }

    pub fn u(&self) -> &VertexId {
        &self.0
    }

    pub fn v(&self) -> &VertexId {
        &self.1
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}--{}", self.0, self.1)
    }
}

/// An undirected edge with its merged, ordered interaction list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    key: EdgeKey,
    pub interactions: Vec<Interaction>,
}

impl Edge {
    pub fn new(a: VertexId, b: VertexId, interactions: Vec<Interaction>) -> Result<Self> {
        Ok(Edge {
            key: EdgeKey::new(a, b)?,
            interactions,
        })
    }

    pub fn key(&self) -> &EdgeKey {
        &self.key
    }

    pub fn u(&self) -> &VertexId {
        self.key.u()
    }

    pub fn v(&self) -> &VertexId {
        self.key.v()
    }
}

/// Simple undirected social graph. Immutable once constructed; every edge
/// endpoint resolves to a vertex and there is at most one edge per
/// unordered pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialGraph {
    vertices: BTreeMap<VertexId, Vertex>,
    edges: BTreeMap<EdgeKey, Edge>,
}

impl SocialGraph {
    /// Builds a graph, validating invariants. Duplicate vertex ids are an
    /// error; edges given twice for the same unordered pair are merged by
    /// concatenating their interaction lists in input order.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let mut vmap = BTreeMap::new();
        for v in vertices {
            if vmap.contains_key(&v.id) {
                return Err(Error::DuplicateVertex(v.id.to_string()));
            }
            vmap.insert(v.id.clone(), v);
        }
        let mut emap: BTreeMap<EdgeKey, Edge> = BTreeMap::new();
        for e in edges {
            for endpoint in [e.u(), e.v()] {
                if !vmap.contains_key(endpoint) {
                    return Err(Error::UnknownVertex(endpoint.to_string()));
                }
            }
            match emap.get_mut(e.key()) {
                Some(existing) => existing.interactions.extend(e.interactions),
                None => {
                    emap.insert(e.key().clone(), e);
                }
            }
        }
        Ok(SocialGraph {
            vertices: vmap,
            edges: emap,
        })
    }

    pub fn empty() -> Self {
        SocialGraph {
            vertices: BTreeMap::new(),
            edges: BTreeMap::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, id: &VertexId) -> Option<&Vertex> {
        self.vertices.get(id)
    }

    pub fn edge(&self, key: &EdgeKey) -> Option<&Edge> {
        self.edges.get(key)
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices.values()
    }

    /// Edges in ascending key order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.values()
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.keys()
    }

    pub fn contains_vertex(&self, id: &VertexId) -> bool {
        self.vertices.contains_key(id)
    }

    /// The subgraph on exactly the given edges; its vertex set is the set
    /// of their endpoints. Attributes are copied unchanged.
    pub fn induced_subgraph(&self, keep: &BTreeSet<EdgeKey>) -> Result<SocialGraph> {
        let mut vertices = BTreeMap::new();
        let mut edges = BTreeMap::new();
        for key in keep {
            let edge = self
                .edges
                .get(key)
                .ok_or_else(|| Error::UnknownEdge(key.u().to_string(), key.v().to_string()))?;
            for endpoint in [key.u(), key.v()] {
                if !vertices.contains_key(endpoint) {
                    let v = self.vertices[endpoint].clone();
                    vertices.insert(endpoint.clone(), v);
                }
            }
            edges.insert(key.clone(), edge.clone());
        }
        Ok(SocialGraph { vertices, edges })
    }

    /// Partition of the vertex set into connected components, each sorted,
    /// ordered by smallest contained id. Isolated vertices are singletons.
    pub fn connected_components(&self) -> Vec<BTreeSet<VertexId>> {
        let ids: Vec<&VertexId> = self.vertices.keys().collect();
        let index: BTreeMap<&VertexId, usize> =
            ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        let mut dsu = DisjointSets::new(ids.len());
        for key in self.edges.keys() {
            dsu.union(index[key.u()], index[key.v()]);
        }
        let mut groups: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        for (i, id) in ids.iter().enumerate() {
            groups
                .entry(dsu.find(i))
                .or_default()
                .insert((*id).clone());
        }
        let mut components: Vec<BTreeSet<VertexId>> = groups.into_values().collect();
        components.sort_by(|a, b| a.iter().next().cmp(&b.iter().next()));
        components
    }
}

/// Union-find with path halving and union by size.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Symmetric non-negative integer weight matrix over an ordered vertex
/// list, zero on the diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedAdjacency {
    order: Vec<VertexId>,
    weights: Vec<Vec<u64>>,
}

impl<'de> Deserialize<'de> for WeightedAdjacency {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            order: Vec<VertexId>,
            weights: Vec<Vec<u64>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        WeightedAdjacency::new(raw.order, raw.weights).map_err(serde::de::Error::custom)
    }
}

impl WeightedAdjacency {
    /// Validates shape, id uniqueness, symmetry, and the zero diagonal.
    pub fn new(order: Vec<VertexId>, weights: Vec<Vec<u64>>) -> Result<Self> {
        let n = order.len();
        let mut seen = BTreeSet::new();
        for id in &order {
            if !seen.insert(id.clone()) {
                return Err(Error::DuplicateVertex(id.to_string()));
            }
        }
        if weights.len() != n {
            return Err(Error::MatrixShape(format!(
                "{} rows for {} vertices",
                weights.len(),
                n
            )));
        }
        for (i, row) in weights.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MatrixShape(format!(
                    "row {} has {} columns, expected {}",
                    i,
                    row.len(),
                    n
                )));
            }
        }
        for i in 0..n {
            if weights[i][i] != 0 {
                return Err(Error::NonzeroDiagonal(order[i].to_string()));
            }
            for j in (i + 1)..n {
                if weights[i][j] != weights[j][i] {
                    return Err(Error::AsymmetricMatrix(
                        order[i].to_string(),
                        order[j].to_string(),
                    ));
                }
            }
        }
        Ok(WeightedAdjacency { order, weights })
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn index_of(&self, id: &VertexId) -> Option<usize> {
        self.order.iter().position(|v| v == id)
    }

    pub fn weight_at(&self, i: usize, j: usize) -> u64 {
        self.weights[i][j]
    }

    pub fn weight(&self, u: &VertexId, v: &VertexId) -> Result<u64> {
        let i = self
            .index_of(u)
            .ok_or_else(|| Error::UnknownVertex(u.to_string()))?;
        let j = self
            .index_of(v)
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
        Ok(self.weights[i][j])
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.weights
    }

    pub fn max_weight(&self) -> u64 {
        self.weights
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Edges with positive weight, in ascending key order.
    pub fn positive_edges(&self) -> Vec<(EdgeKey, u64)> {
        let mut out = Vec::new();
        for i in 0..self.order.len() {
            for j in (i + 1)..self.order.len() {
                let w = self.weights[i][j];
                if w > 0 {
                    let key = EdgeKey::new(self.order[i].clone(), self.order[j].clone())
                        .expect("distinct order entries");
                    out.push((key, w));
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Normalized tie strength: the pair's weight divided by the maximum
    /// entry of the matrix, in [0, 1]. Zero for an all-zero matrix.
    pub fn tie_strength(&self, u: &VertexId, v: &VertexId) -> Result<f64> {
        if u == v {
            return Err(Error::SelfLoop(u.to_string()));
        }
        let w = self.weight(u, v)?;
        let max = self.max_weight();
        if max == 0 {
            return Ok(0.0);
        }
        Ok(w as f64 / max as f64)
    }
}

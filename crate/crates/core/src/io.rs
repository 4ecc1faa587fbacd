//! On-disk formats: the JSON graph document, key lists, weight files,
//! adjacency CSV, the communities result document, DOT output, and the
//! generator's ground-truth sidecar. All exports are byte-deterministic
//! and end with a trailing newline.

use std::collections::BTreeMap;

use chrono::{DateTime, SecondsFormat, TimeZone, Utc};
use serde::{Deserialize, Serialize};

use crate::community::DetectionResult;
use crate::error::{Error, Result};
use crate::graph::{
    Edge, EdgeKey, Interaction, InteractionKind, SocialGraph, Vertex, VertexId, WeightedAdjacency,
};
use crate::synth::GroundTruth;
use crate::text::ContextKey;

/// Result export formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    CommunitiesJson,
    Dot,
    AdjacencyCsv,
}

// ---------------------------------------------------------------------------
// Graph documents
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    vertices: Vec<BTreeMap<String, String>>,
    edges: Vec<EdgeDoc>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    source: String,
    target: String,
    interactions: Vec<InteractionDoc>,
}

#[derive(Serialize, Deserialize)]
struct InteractionDoc {
    kind: InteractionKind,
    text: String,
    timestamp: String,
}

fn parse_timestamp(raw: &str) -> Result<i64> {
    let parsed = DateTime::parse_from_rfc3339(raw)
        .map_err(|e| Error::Document(format!("bad timestamp {raw:?}: {e}")))?;
    let seconds = parsed.with_timezone(&Utc).timestamp();
    if seconds < 0 {
        return Err(Error::NegativeTimestamp(seconds));
    }
    Ok(seconds)
}

fn format_timestamp(seconds: i64) -> String {
    Utc.timestamp_opt(seconds, 0)
        .single()
        .expect("validated timestamps are representable")
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Parses a JSON graph document. Duplicate edges for the same unordered
/// pair are merged by concatenating their interactions; endpoint and
/// self-loop violations are integrity errors, and malformed JSON reports
/// line and column. A failed parse never yields a partial graph.
pub fn parse_graph(bytes: &[u8]) -> Result<SocialGraph> {
    let doc: GraphDoc = serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut vertices = Vec::with_capacity(doc.vertices.len());
    for mut fields in doc.vertices {
        let id_raw = fields
            .remove("id")
            .ok_or_else(|| Error::Document("vertex without an \"id\" field".to_string()))?;
        vertices.push(Vertex::with_attributes(VertexId::new(id_raw)?, fields));
    }
    let mut edges = Vec::with_capacity(doc.edges.len());
    for edge in doc.edges {
        let mut interactions = Vec::with_capacity(edge.interactions.len());
        for i in edge.interactions {
            interactions.push(Interaction::new(i.kind, i.text, parse_timestamp(&i.timestamp)?)?);
        }
        edges.push(Edge::new(
            VertexId::new(edge.source)?,
            VertexId::new(edge.target)?,
            interactions,
        )?);
    }
    SocialGraph::new(vertices, edges)
}

/// Serializes a graph back to the document format, canonically: vertices
/// and edges in id order, attributes alphabetical, timestamps in UTC.
pub fn serialize_graph(graph: &SocialGraph) -> Vec<u8> {
    let vertices = graph
        .vertices()
        .map(|v| {
            let mut fields = v.attributes.clone();
            fields.insert("id".to_string(), v.id.to_string());
            fields
        })
        .collect();
    let edges = graph
        .edges()
        .map(|e| EdgeDoc {
            source: e.u().to_string(),
            target: e.v().to_string(),
            interactions: e
                .interactions
                .iter()
                .map(|i| InteractionDoc {
                    kind: i.kind,
                    text: i.text.clone(),
                    timestamp: format_timestamp(i.timestamp),
                })
                .collect(),
        })
        .collect();
    let doc = GraphDoc { vertices, edges };
    let mut bytes = serde_json::to_vec_pretty(&doc).expect("graph documents serialize");
    bytes.push(b'\n');
    bytes
}

// ---------------------------------------------------------------------------
// Context keys
// ---------------------------------------------------------------------------

/// Parses a key list: one key per line, '#' comments and blanks ignored,
/// case-folded, deduplicated, order preserved. A line that does not reduce
/// to exactly one token is an error, as is an empty list.
pub fn parse_keys(bytes: &[u8]) -> Result<Vec<ContextKey>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("key file is not UTF-8: {e}"),
    })?;
    let mut keys = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let key = ContextKey::new(line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    if keys.is_empty() {
        return Err(Error::NoKeys);
    }
    Ok(keys)
}

// ---------------------------------------------------------------------------
// Weight files and adjacency CSV
// ---------------------------------------------------------------------------

/// Parses an edge-triple weight file: `<u> <v> <w>` per line, whitespace
/// separated, '#' comments and blanks ignored. Zero weights are legal
/// entries (an edge with no burst evidence).
pub fn parse_weights(bytes: &[u8]) -> Result<Vec<(VertexId, VertexId, u64)>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("weights file is not UTF-8: {e}"),
    })?;
    let mut entries = Vec::new();
    let mut seen: BTreeMap<EdgeKey, usize> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected `<u> <v> <weight>`, got {line:?}"),
            });
        }
        let u = VertexId::new(parts[0])?;
        let v = VertexId::new(parts[1])?;
        let w: u64 = parts[2].parse().map_err(|e| Error::Parse {
            line: idx + 1,
            message: format!("bad weight {:?}: {e}", parts[2]),
        })?;
        let key = EdgeKey::new(u.clone(), v.clone())?;
        if let Some(first) = seen.insert(key.clone(), idx + 1) {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("duplicate entry for {key} (first at line {first})"),
            });
        }
        entries.push((u, v, w));
    }
    Ok(entries)
}

/// Builds the adjacency matrix implied by weight entries: the vertex order
/// is the sorted set of mentioned endpoints.
pub fn weights_to_adjacency(entries: &[(VertexId, VertexId, u64)]) -> Result<WeightedAdjacency> {
    let mut ids: Vec<VertexId> = entries
        .iter()
        .flat_map(|(u, v, _)| [u.clone(), v.clone()])
        .collect();
    ids.sort();
    ids.dedup();
    let index: BTreeMap<&VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut weights = vec![vec![0u64; ids.len()]; ids.len()];
    for (u, v, w) in entries {
        let i = index[u];
        let j = index[v];
        weights[i][j] = *w;
        weights[j][i] = *w;
    }
    WeightedAdjacency::new(ids, weights)
}

/// Renders the matrix as CSV: a header row of vertex ids, then the rows.
pub fn adjacency_to_csv(adjacency: &WeightedAdjacency) -> Vec<u8> {
    let mut out = String::new();
    let ids: Vec<&str> = adjacency.order().iter().map(|v| v.as_str()).collect();
    out.push_str(&ids.join(","));
    out.push('\n');
    for row in adjacency.rows() {
        let cells: Vec<String> = row.iter().map(|w| w.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out.into_bytes()
}

/// Parses the CSV form back into a validated matrix.
pub fn parse_adjacency_csv(bytes: &[u8]) -> Result<WeightedAdjacency> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("matrix file is not UTF-8: {e}"),
    })?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty matrix file".to_string(),
    })?;
    let order: Vec<VertexId> = header
        .split(',')
        .map(|s| VertexId::new(s.trim()))
        .collect::<Result<_>>()?;
    let mut weights = Vec::with_capacity(order.len());
    for (idx, raw) in lines {
        if raw.trim().is_empty() {
            continue;
        }
        let row: Vec<u64> = raw
            .split(',')
            .map(|cell| {
                cell.trim().parse::<u64>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("bad weight {:?}: {e}", cell.trim()),
                })
            })
            .collect::<Result<_>>()?;
        weights.push(row);
    }
    WeightedAdjacency::new(order, weights)
}

/// Reads a matrix from either supported format: lines with commas are the
/// CSV form, otherwise edge triples.
pub fn parse_matrix(bytes: &[u8]) -> Result<WeightedAdjacency> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        line: 0,
        message: format!("matrix file is not UTF-8: {e}"),
    })?;
    let first_data_line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first_data_line {
        Some(line) if line.contains(',') => parse_adjacency_csv(bytes),
        Some(_) => weights_to_adjacency(&parse_weights(bytes)?),
        None => Err(Error::Parse {
            line: 1,
            message: "matrix file has no data lines".to_string(),
        }),
    }
}

// ---------------------------------------------------------------------------
// Result documents
// ---------------------------------------------------------------------------

/// Serializes a detection result in the requested format.
pub fn export(result: &DetectionResult, format: ExportFormat) -> Vec<u8> {
    match format {
        ExportFormat::CommunitiesJson => {
            let mut bytes =
                serde_json::to_vec_pretty(result).expect("detection results serialize");
            bytes.push(b'\n');
            bytes
        }
        ExportFormat::Dot => render_dot(result),
        ExportFormat::AdjacencyCsv => adjacency_to_csv(&result.matrix),
    }
}

/// Parses a communities document back into a result.
pub fn parse_result(bytes: &[u8]) -> Result<DetectionResult> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

fn dot_escape(raw: &str) -> String {
    raw.replace('\\', "\\\\").replace('"', "\\\"")
}

fn render_dot(result: &DetectionResult) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("graph communities {\n");
    for community in &result.communities {
        out.push_str(&format!("  subgraph cluster_{} {{\n", community.id));
        out.push_str(&format!("    label=\"community {}\";\n", community.id));
        for vertex in &community.vertices {
            out.push_str(&format!("    \"{}\";\n", dot_escape(vertex.as_str())));
        }
        for edge in &community.edges {
            out.push_str(&format!(
                "    \"{}\" -- \"{}\" [label=\"w={}\"];\n",
                dot_escape(edge.source.as_str()),
                dot_escape(edge.target.as_str()),
                edge.weight
            ));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out.into_bytes()
}

// ---------------------------------------------------------------------------
// Generator documents
// ---------------------------------------------------------------------------

/// Parses and validates a generator parameter file.
pub fn parse_params(bytes: &[u8]) -> Result<crate::synth::SynthParams> {
    let params: crate::synth::SynthParams =
        serde_json::from_slice(bytes).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
    params.validate()?;
    Ok(params)
}

/// Serializes the generator's ground truth.
pub fn serialize_truth(truth: &GroundTruth) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(truth).expect("ground truth serializes");
    bytes.push(b'\n');
    bytes
}

/// Parses a ground-truth sidecar document.
pub fn parse_truth(bytes: &[u8]) -> Result<GroundTruth> {
    serde_json::from_slice(bytes).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::{detect_from_matrix, DetectionMode};
    use crate::test_util::fixture_adjacency;

    const LISTING_VERTEX: &str = r#"{
      "vertices": [
        {
          "id": "5843215622",
          "name": "Jibon_Kumar",
          "first_name": "Jibon",
          "last_name": "Kumar",
          "username": "Hellrider_Jibon",
          "gender": "male",
          "type": "user",
          "locale": "en_US",
          "hometown": "Rangpur,_Bangladesh",
          "email": "jibon444@ymail.com"
        }
      ],
      "edges": []
    }"#;

    #[test]
    fn parse_empty_document() {
        let g = parse_graph(br#"{"vertices": [], "edges": []}"#).unwrap();
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn parse_profile_vertex() {
        let g = parse_graph(LISTING_VERTEX.as_bytes()).unwrap();
        assert_eq!(g.vertex_count(), 1);
        let id = VertexId::new("5843215622").unwrap();
        let v = g.vertex(&id).unwrap();
        assert_eq!(v.attributes["name"], "Jibon_Kumar");
        assert_eq!(v.attributes["hometown"], "Rangpur,_Bangladesh");
        assert_eq!(v.attributes["locale"], "en_US");
        assert!(!v.attributes.contains_key("id"));
    }

    #[test]
    fn parse_reports_unknown_endpoint() {
        let doc = br#"{
          "vertices": [{"id": "a"}],
          "edges": [{"source": "a", "target": "unknown-99", "interactions": []}]
        }"#;
        match parse_graph(doc) {
            Err(Error::UnknownVertex(id)) => assert_eq!(id, "unknown-99"),
            other => panic!("expected UnknownVertex, got {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_self_loop_and_bad_json() {
        let doc = br#"{
          "vertices": [{"id": "a"}],
          "edges": [{"source": "a", "target": "a", "interactions": []}]
        }"#;
        assert!(matches!(parse_graph(doc), Err(Error::SelfLoop(_))));
        match parse_graph(b"{\"vertices\": [,]}") {
            Err(Error::Parse { line, .. }) => assert!(line >= 1),
            other => panic!("expected Parse, got {other:?}"),
        }
    }

    #[test]
    fn timestamps_are_iso8601_utc() {
        let doc = br#"{
          "vertices": [{"id": "a"}, {"id": "b"}],
          "edges": [{
            "source": "a", "target": "b",
            "interactions": [
              {"kind": "comment", "text": "quiz", "timestamp": "1970-01-02T00:00:00Z"},
              {"kind": "like", "text": "", "timestamp": "1970-01-01T06:00:00+06:00"}
            ]
          }]
        }"#;
        let g = parse_graph(doc).unwrap();
        let key = EdgeKey::new(
            VertexId::new("a").unwrap(),
            VertexId::new("b").unwrap(),
        )
        .unwrap();
        let edge = g.edge(&key).unwrap();
        assert_eq!(edge.interactions[0].timestamp, 86_400);
        // +06:00 offset normalizes to midnight UTC.
        assert_eq!(edge.interactions[1].timestamp, 0);

        let bad = br#"{
          "vertices": [{"id": "a"}, {"id": "b"}],
          "edges": [{
            "source": "a", "target": "b",
            "interactions": [{"kind": "like", "text": "", "timestamp": "1969-12-31T00:00:00Z"}]
          }]
        }"#;
        assert!(matches!(parse_graph(bad), Err(Error::NegativeTimestamp(_))));
    }

    #[test]
    fn graph_round_trip_is_stable() {
        let doc = br#"{
          "vertices": [{"id": "b"}, {"id": "a", "name": "Ava"}],
          "edges": [{
            "source": "b", "target": "a",
            "interactions": [{"kind": "share", "text": "Exam week", "timestamp": "2019-12-18T00:00:00+00:00"}]
          }]
        }"#;
        let g = parse_graph(doc).unwrap();
        let first = serialize_graph(&g);
        let reparsed = parse_graph(&first).unwrap();
        assert_eq!(g, reparsed);
        let second = serialize_graph(&reparsed);
        assert_eq!(first, second);
    }

    #[test]
    fn keys_parse_fold_and_dedup() {
        let keys = parse_keys(b"AIUB\nExam\nQuiz\n").unwrap();
        let texts: Vec<&str> = keys.iter().map(|k| k.text()).collect();
        assert_eq!(texts, vec!["aiub", "exam", "quiz"]);

        let keys = parse_keys(b"Exam\nexam\n").unwrap();
        assert_eq!(keys.len(), 1);

        assert!(matches!(parse_keys(b"# comment\n\n"), Err(Error::NoKeys)));
        assert!(matches!(
            parse_keys(b"two words\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn weights_file_round_trips_through_matrix() {
        let text = b"# demo\nA B 17\nA D 9\nD E 0\n";
        let entries = parse_weights(text).unwrap();
        assert_eq!(entries.len(), 3);
        let adj = weights_to_adjacency(&entries).unwrap();
        assert_eq!(adj.len(), 4);
        assert_eq!(
            adj.weight(
                &VertexId::new("A").unwrap(),
                &VertexId::new("B").unwrap()
            )
            .unwrap(),
            17
        );
        let csv = adjacency_to_csv(&adj);
        let reparsed = parse_adjacency_csv(&csv).unwrap();
        assert_eq!(adj, reparsed);
        assert_eq!(adjacency_to_csv(&reparsed), csv);
    }

    #[test]
    fn weights_file_rejects_duplicates_and_garbage() {
        assert!(matches!(
            parse_weights(b"A B 1\nB A 2\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_weights(b"A B\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_weights(b"A B x\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_weights(b"A A 3\n"), Err(Error::SelfLoop(_))));
    }

    #[test]
    fn matrix_sniffing_accepts_both_forms() {
        let triples = parse_matrix(b"A B 17\nB C 4\n").unwrap();
        assert_eq!(triples.len(), 3);
        let csv = parse_matrix(b"A,B\n0,2\n2,0\n").unwrap();
        assert_eq!(csv.len(), 2);
        assert!(parse_matrix(b"# nothing\n").is_err());
    }

    #[test]
    fn csv_fixture_has_expected_cells() {
        let adj = fixture_adjacency();
        let csv = adjacency_to_csv(&adj);
        let text = String::from_utf8(csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "A,B,C,D,E,F,G,H,I,J,K");
        // Row A, column B = 17; row C, column F = 29.
        let row_a: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(row_a[1], "17");
        let row_c: Vec<&str> = lines[3].split(',').collect();
        assert_eq!(row_c[5], "29");
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn exports_are_deterministic() {
        let adj = fixture_adjacency();
        let result = detect_from_matrix(&adj, 10.0, DetectionMode::Weight).unwrap();
        for format in [
            ExportFormat::CommunitiesJson,
            ExportFormat::Dot,
            ExportFormat::AdjacencyCsv,
        ] {
            let a = export(&result, format);
            let b = export(&result, format);
            assert_eq!(a, b);
            assert_eq!(*a.last().unwrap(), b'\n');
        }
    }

    #[test]
    fn empty_result_serializes_empty_communities() {
        let adj = WeightedAdjacency::new(Vec::new(), Vec::new()).unwrap();
        let result = detect_from_matrix(&adj, 1.0, DetectionMode::Weight).unwrap();
        let bytes = export(&result, ExportFormat::CommunitiesJson);
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.contains("\"communities\": []"));
    }

    #[test]
    fn result_document_round_trips() {
        let adj = fixture_adjacency();
        let result = detect_from_matrix(&adj, 10.0, DetectionMode::Weight).unwrap();
        let bytes = export(&result, ExportFormat::CommunitiesJson);
        let reparsed = parse_result(&bytes).unwrap();
        assert_eq!(result, reparsed);
        assert_eq!(export(&reparsed, ExportFormat::CommunitiesJson), bytes);
    }

    #[test]
    fn dot_output_is_clustered() {
        let adj = fixture_adjacency();
        let result = detect_from_matrix(&adj, 10.0, DetectionMode::Weight).unwrap();
        let text = String::from_utf8(export(&result, ExportFormat::Dot)).unwrap();
        assert!(text.starts_with("graph communities {"));
        assert!(text.contains("subgraph cluster_0 {"));
        assert!(text.contains("\"A\" -- \"B\" [label=\"w=17\"];"));
        assert!(text.ends_with("}\n"));
    }
}

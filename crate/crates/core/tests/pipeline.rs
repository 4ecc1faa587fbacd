//! End-to-end library tests driven by the repository fixtures.

use std::collections::BTreeSet;
use std::path::PathBuf;

use ilscm_core::community::{detect, detect_from_matrix, DetectionConfig, DetectionMode};
use ilscm_core::graph::{Edge, Interaction, InteractionKind, SocialGraph, Vertex, VertexId};
use ilscm_core::io;
use ilscm_core::synth::{evaluate, generate, SynthParams};
use ilscm_core::text::{
    bin_frequencies, burstiness_classify, extract_burst_words, key_profile, pearson, ContextKey,
    TimeBinConfig, TopicClass,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn read_fixture(name: &str) -> Vec<u8> {
    std::fs::read(fixture(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

#[test]
fn weight_fixture_detects_one_cluster_at_ten() {
    let adjacency = io::parse_matrix(&read_fixture("fig5_weights.txt")).unwrap();
    assert_eq!(adjacency.len(), 11);
    let result = detect_from_matrix(&adjacency, 10.0, DetectionMode::Weight).unwrap();
    assert_eq!(result.communities.len(), 1);
    let community = &result.communities[0];
    let vertices: Vec<&str> = community.vertices.iter().map(|v| v.as_str()).collect();
    assert_eq!(vertices, vec!["A", "B", "C", "E", "F", "G", "I", "K"]);
    let edges: Vec<(String, u64)> = community
        .edges
        .iter()
        .map(|e| (format!("{}-{}", e.source, e.target), e.weight))
        .collect();
    assert_eq!(
        edges,
        vec![
            ("A-B".into(), 17),
            ("B-C".into(), 21),
            ("B-E".into(), 14),
            ("C-F".into(), 29),
            ("E-F".into(), 19),
            ("F-G".into(), 15),
            ("F-I".into(), 25),
            ("I-K".into(), 25),
        ]
    );
}

#[test]
fn keys_fixture_parses_to_three_keys() {
    let keys = io::parse_keys(&read_fixture("keys.txt")).unwrap();
    let texts: Vec<&str> = keys.iter().map(|k| k.text()).collect();
    assert_eq!(texts, vec!["aiub", "exam", "quiz"]);
}

fn planted_params() -> SynthParams {
    serde_json::from_slice(&read_fixture("planted_aiub.json")).unwrap()
}

fn detect_planted(params: &SynthParams, lambda: f64) -> (ilscm_core::community::DetectionResult, ilscm_core::synth::GroundTruth) {
    let (graph, truth) = generate(params).unwrap();
    let config = DetectionConfig::new(
        vec![ContextKey::new("aiub").unwrap()],
        lambda,
        params.bins(),
    );
    let result = detect(&graph, &config).unwrap();
    (result, truth)
}

#[test]
fn planted_fixture_is_recovered_exactly() {
    let params = planted_params();
    let (result, truth) = detect_planted(&params, 4.0);
    let report = evaluate(&result, &truth);
    assert_eq!(report.burst_f1(), 1.0, "report: {report:?}");

    // Nothing is reported outside the planted burst community.
    let truth_sets = truth.communities();
    let burst_vertices = &truth_sets[truth.burst_community];
    let detected_union: BTreeSet<_> = result
        .communities
        .iter()
        .flat_map(|c| c.vertices.iter().cloned())
        .collect();
    assert_eq!(&detected_union, burst_vertices);
}

#[test]
fn planted_recovery_is_robust_across_seeds() {
    let base = planted_params();
    let mut total_f1 = 0.0;
    let seeds = 1..=20u64;
    let count = seeds.clone().count() as f64;
    for seed in seeds {
        let params = SynthParams { seed, ..base.clone() };
        let (result, truth) = detect_planted(&params, 4.0);
        total_f1 += evaluate(&result, &truth).burst_f1();
    }
    let mean = total_f1 / count;
    assert!(mean >= 0.9, "mean burst F1 {mean} below 0.9");
}

// Temporary tuning helper; run with
//   cargo test -p ilscm-core --test pipeline scan -- --ignored --nocapture
#[test]
#[ignore]
fn scan_seeds() {
    let base = planted_params();
    for seed in [base.seed].into_iter().chain(20190401..20190440u64) {
        let params = SynthParams { seed, ..base.clone() };
        let (result, truth) = detect_planted(&params, 4.0);
        let report = evaluate(&result, &truth);
        let truth_sets = truth.communities();
        let burst_vertices = &truth_sets[truth.burst_community];
        let detected_union: BTreeSet<_> = result
            .communities
            .iter()
            .flat_map(|c| c.vertices.iter().cloned())
            .collect();
        let clean = &detected_union == burst_vertices;
        println!(
            "seed {seed}: f1={:.4} communities={} clean={clean}",
            report.burst_f1(),
            result.communities.len()
        );
    }
}

#[test]
fn zero_burst_rate_detects_nothing() {
    // No planted signal: a background word used as the key finds no
    // temporally coherent community at any threshold >= 1.
    let mut params = planted_params();
    params.burst_rate = 0;
    params.burst_vocab.clear();
    for seed in [3, 11, 29] {
        params.seed = seed;
        let (graph, _) = generate(&params).unwrap();
        let config = DetectionConfig::new(
            vec![ContextKey::new("bg0000").unwrap()],
            1.0,
            params.bins(),
        );
        let result = detect(&graph, &config).unwrap();
        assert_eq!(
            result.communities.len(),
            0,
            "seed {seed} produced {} communities",
            result.communities.len()
        );
    }
}

#[test]
fn zero_burst_rate_makes_the_event_key_unknown() {
    let mut params = planted_params();
    params.burst_rate = 0;
    params.burst_vocab.clear();
    params.seed = 5;
    let (graph, _) = generate(&params).unwrap();
    let config = DetectionConfig::new(
        vec![ContextKey::new("aiub").unwrap()],
        1.0,
        params.bins(),
    );
    assert!(matches!(
        detect(&graph, &config),
        Err(ilscm_core::Error::UnknownContextKey(k)) if k == "aiub"
    ));
}

/// Plants seventeen words that spike exactly with the key and verifies
/// each against an independent per-word check before counting.
#[test]
fn seventeen_planted_words_weigh_seventeen() {
    let bins = TimeBinConfig::new(0, 100, 6).unwrap();
    let planted: Vec<String> = (0..17).map(|i| format!("planted{i:02}")).collect();
    let mut interactions = Vec::new();
    // Uniform chatter everywhere.
    for bin in 0..6i64 {
        interactions.push(
            Interaction::new(InteractionKind::Comment, "campus coffee", bin * 100).unwrap(),
        );
    }
    // The spike: key and planted words together in bins 2 (x3) and 3 (x1).
    let spike_text = format!("aiub {}", planted.join(" "));
    for _ in 0..3 {
        interactions.push(Interaction::new(InteractionKind::Comment, &spike_text, 230).unwrap());
    }
    interactions.push(Interaction::new(InteractionKind::Comment, &spike_text, 330).unwrap());

    let a = VertexId::new("a").unwrap();
    let b = VertexId::new("b").unwrap();
    let graph = SocialGraph::new(
        vec![Vertex::new(a.clone()), Vertex::new(b.clone())],
        vec![Edge::new(a.clone(), b.clone(), interactions).unwrap()],
    )
    .unwrap();
    let key = ContextKey::new("aiub").unwrap();
    let key_vec = key_profile(&graph, &key, &bins).unwrap();

    let edge = graph.edges().next().unwrap();
    // Independent check: bin, correlate, and burstiness-test each planted
    // word on its own.
    for word in &planted {
        let v = bin_frequencies(&edge.interactions, word, &bins);
        let r = pearson(&v, &key_vec).unwrap();
        assert!(r >= 0.7, "{word}: r = {r}");
        let report = burstiness_classify(&v, 3.0);
        assert_eq!(report.class, TopicClass::Temporal, "{word}");
    }

    let set = extract_burst_words(edge, &key_vec, &bins, 0.7, 3.0);
    assert_eq!(set.words.len(), 17);
    let weight = ilscm_core::weighting::edge_weight(&set);
    assert_eq!(weight.w, 17);
}

//! Tokenization, time-binned frequency vectors, the Pearson correlation
//! test, temporal/stable classification, and the per-edge burst-word
//! search.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Interaction, SocialGraph};

const BUILTIN_STOPWORDS: &str = include_str!("../resources/stopwords.txt");

/// Environment variable that overrides the stopword file path.
pub const STOPWORDS_ENV: &str = "ILSCM_STOPWORDS";

static STOPWORDS: OnceLock<BTreeSet<String>> = OnceLock::new();

fn parse_stopwords(text: &str) -> BTreeSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| l.to_lowercase())
        .collect()
}

/// Loads the stopword list once per process: from the file named by
/// `ILSCM_STOPWORDS` when set, otherwise the built-in list. Call
/// [`ensure_stopwords`] first to surface a bad override path as an error
/// instead of a panic.
pub fn stopwords() -> &'static BTreeSet<String> {
    STOPWORDS.get_or_init(|| match load_override() {
        Ok(Some(set)) => set,
        Ok(None) => parse_stopwords(BUILTIN_STOPWORDS),
        Err(e) => panic!("{STOPWORDS_ENV}: {e}"),
    })
}

fn load_override() -> std::result::Result<Option<BTreeSet<String>>, String> {
    match std::env::var_os(STOPWORDS_ENV) {
        None => Ok(None),
        Some(path) => match std::fs::read_to_string(&path) {
            Ok(text) => Ok(Some(parse_stopwords(&text))),
            Err(e) => Err(format!("cannot read {}: {e}", path.to_string_lossy())),
        },
    }
}

/// Validates the stopword configuration without panicking.
pub fn ensure_stopwords() -> Result<()> {
    if STOPWORDS.get().is_some() {
        return Ok(());
    }
    if let Err(message) = load_override() {
        return Err(Error::InvalidConfig(format!("{STOPWORDS_ENV}: {message}")));
    }
    stopwords();
    Ok(())
}

/// Lowercases, splits on any non-alphanumeric character, drops tokens
/// shorter than two characters and stopwords. Order is preserved.
pub fn tokenize(text: &str) -> Vec<String> {
    let stop = stopwords();
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| t.chars().count() >= 2)
        .filter(|t| !stop.contains(*t))
        .map(str::to_owned)
        .collect()
}

/// A user-supplied query token denoting an event of interest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ContextKey {
    text: String,
}

impl ContextKey {
    /// Accepts input that tokenizes to exactly one token.
    pub fn new(raw: &str) -> Result<Self> {
        let tokens = tokenize(raw);
        match tokens.len() {
            1 => Ok(ContextKey {
                text: tokens.into_iter().next().unwrap(),
            }),
            0 => Err(Error::InvalidKey(
                raw.to_string(),
                "no usable token (too short or a stopword)".to_string(),
            )),
            n => Err(Error::InvalidKey(
                raw.to_string(),
                format!("{n} tokens; a context key is a single token"),
            )),
        }
    }

    pub(crate) fn from_token(token: String) -> Self {
        ContextKey { text: token }
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

impl fmt::Display for ContextKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl TryFrom<String> for ContextKey {
    type Error = Error;
    fn try_from(value: String) -> Result<Self> {
        ContextKey::new(&value)
    }
}

impl From<ContextKey> for String {
    fn from(key: ContextKey) -> String {
        key.text
    }
}

/// Uniform time binning: `bin_count` bins of `bin_width` seconds starting
/// at `origin`. At least two bins (correlation needs variance).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeBinConfig {
    pub origin: i64,
    pub bin_width: i64,
    pub bin_count: usize,
}

impl TimeBinConfig {
    pub fn new(origin: i64, bin_width: i64, bin_count: usize) -> Result<Self> {
        if bin_width <= 0 {
            return Err(Error::InvalidBins(format!(
                "bin_width must be positive, got {bin_width}"
            )));
        }
        if bin_count < 2 {
            return Err(Error::InvalidBins(format!(
                "bin_count must be at least 2, got {bin_count}"
            )));
        }
        let span = bin_width
            .checked_mul(bin_count as i64)
            .and_then(|s| s.checked_add(origin));
        if span.is_none() {
            return Err(Error::InvalidBins("horizon overflows".to_string()));
        }
        Ok(TimeBinConfig {
            origin,
            bin_width,
            bin_count,
        })
    }

    /// Exclusive end of the covered interval.
    pub fn horizon_end(&self) -> i64 {
        self.origin + self.bin_width * self.bin_count as i64
    }

    /// Bin index for a timestamp, or None outside [origin, horizon).
    pub fn bin_of(&self, timestamp: i64) -> Option<usize> {
        if timestamp < self.origin || timestamp >= self.horizon_end() {
            return None;
        }
        Some(((timestamp - self.origin) / self.bin_width) as usize)
    }

    /// Bins covering every interaction of the graph: origin at the earliest
    /// timestamp, `ceil(span / bin_width)` bins, at least two. An empty
    /// corpus gets two bins at origin zero.
    pub fn covering(graph: &SocialGraph, bin_width: i64) -> Result<Self> {
        if bin_width <= 0 {
            return Err(Error::InvalidBins(format!(
                "bin_width must be positive, got {bin_width}"
            )));
        }
        let mut min_ts: Option<i64> = None;
        let mut max_ts: Option<i64> = None;
        for edge in graph.edges() {
            for i in &edge.interactions {
                min_ts = Some(min_ts.map_or(i.timestamp, |m| m.min(i.timestamp)));
                max_ts = Some(max_ts.map_or(i.timestamp, |m| m.max(i.timestamp)));
            }
        }
        let (origin, span) = match (min_ts, max_ts) {
            (Some(lo), Some(hi)) => (lo, hi - lo + 1),
            _ => (0, 1),
        };
        let count = (span + bin_width - 1) / bin_width;
        TimeBinConfig::new(origin, bin_width, (count.max(2)) as usize)
    }
}

/// Per-word counts over the configured time bins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyVector {
    pub word: String,
    pub counts: Vec<u64>,
}

impl FrequencyVector {
    pub fn new(word: impl Into<String>, counts: Vec<u64>) -> Self {
        FrequencyVector {
            word: word.into(),
            counts,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }
}

/// Temporal (event-driven, peaked) versus stable (persistent interest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopicClass {
    Temporal,
    Stable,
}

impl fmt::Display for TopicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TopicClass::Temporal => f.write_str("temporal"),
            TopicClass::Stable => f.write_str("stable"),
        }
    }
}

/// Burstiness score and class for one word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BurstReport {
    pub word: String,
    pub burstiness: f64,
    pub class: TopicClass,
}

/// Correlation and burstiness of one accepted burst word.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WordScore {
    pub correlation: f64,
    pub burstiness: f64,
}

/// The burst words found on one edge for one context key. Every word
/// passed both the correlation and the burstiness test.
#[derive(Debug, Clone, PartialEq)]
pub struct BurstSet {
    pub edge: (crate::graph::VertexId, crate::graph::VertexId),
    pub key: ContextKey,
    pub words: BTreeSet<String>,
    pub scores: BTreeMap<String, WordScore>,
}

impl BurstSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Counts occurrences of `word` among the tokenized texts of the
/// interactions, binned by timestamp. Interactions outside the horizon are
/// ignored.
pub fn bin_frequencies(
    interactions: &[Interaction],
    word: &str,
    config: &TimeBinConfig,
) -> FrequencyVector {
    let mut counts = vec![0u64; config.bin_count];
    for interaction in interactions {
        if let Some(bin) = config.bin_of(interaction.timestamp) {
            let occurrences = tokenize(&interaction.text)
                .iter()
                .filter(|t| *t == word)
                .count() as u64;
            counts[bin] += occurrences;
        }
    }
    FrequencyVector::new(word, counts)
}

/// Pearson correlation of two equal-length vectors:
///
/// r = (Σxy − Σx·Σy/n) / sqrt((Σx² − (Σx)²/n)(Σy² − (Σy)²/n))
///
/// Each sum is accumulated left to right, so the result is bitwise
/// symmetric in its arguments. The result is clamped to [−1, 1].
pub fn pearson_slices(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let n = x.len() as f64;
    let mut sum_x = 0.0;
    for v in x {
        sum_x += v;
    }
    let mut sum_y = 0.0;
    for v in y {
        sum_y += v;
    }
    let mut sum_xy = 0.0;
    for i in 0..x.len() {
        sum_xy += x[i] * y[i];
    }
    let mut sum_xx = 0.0;
    for v in x {
        sum_xx += v * v;
    }
    let mut sum_yy = 0.0;
    for v in y {
        sum_yy += v * v;
    }
    let var_x = sum_xx - sum_x * sum_x / n;
    let var_y = sum_yy - sum_y * sum_y / n;
    if !(var_x > 0.0) || !(var_y > 0.0) {
        return Err(Error::UndefinedCorrelation);
    }
    let r = (sum_xy - sum_x * sum_y / n) / (var_x * var_y).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}

/// [`pearson_slices`] over frequency-vector counts.
pub fn pearson(x: &FrequencyVector, y: &FrequencyVector) -> Result<f64> {
    let xf: Vec<f64> = x.counts.iter().map(|&c| c as f64).collect();
    let yf: Vec<f64> = y.counts.iter().map(|&c| c as f64).collect();
    pearson_slices(&xf, &yf)
}

/// Peak-to-mean burstiness: max(counts)/mean(counts), zero for an all-zero
/// vector. Temporal iff burstiness ≥ beta.
pub fn burstiness_classify(f: &FrequencyVector, beta: f64) -> BurstReport {
    let burstiness = burstiness_score(&f.counts);
    let class = if burstiness >= beta {
        TopicClass::Temporal
    } else {
        TopicClass::Stable
    };
    BurstReport {
        word: f.word.clone(),
        burstiness,
        class,
    }
}

fn burstiness_score(counts: &[u64]) -> f64 {
    if counts.is_empty() {
        return 0.0;
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let mean = total as f64 / counts.len() as f64;
    let max = *counts.iter().max().unwrap() as f64;
    max / mean
}

/// Corpus-wide time profile of one word across every edge interaction.
pub fn word_profile(graph: &SocialGraph, word: &str, config: &TimeBinConfig) -> FrequencyVector {
    let mut counts = vec![0u64; config.bin_count];
    for edge in graph.edges() {
        let v = bin_frequencies(&edge.interactions, word, config);
        for (acc, c) in counts.iter_mut().zip(v.counts) {
            *acc += c;
        }
    }
    FrequencyVector::new(word, counts)
}

/// The context key's corpus-wide temporal signature. Errors when the key
/// never occurs in any interaction text, binned or not.
pub fn key_profile(
    graph: &SocialGraph,
    key: &ContextKey,
    config: &TimeBinConfig,
) -> Result<FrequencyVector> {
    let mut occurs = false;
    'outer: for edge in graph.edges() {
        for interaction in &edge.interactions {
            if tokenize(&interaction.text).iter().any(|t| t == key.text()) {
                occurs = true;
                break 'outer;
            }
        }
    }
    if !occurs {
        return Err(Error::UnknownContextKey(key.text().to_string()));
    }
    Ok(word_profile(graph, key.text(), config))
}

/// Every distinct token appearing on the edge's interactions.
pub fn edge_vocabulary(edge: &Edge) -> BTreeSet<String> {
    let mut vocab = BTreeSet::new();
    for interaction in &edge.interactions {
        vocab.extend(tokenize(&interaction.text));
    }
    vocab
}

/// The burst-word search on one edge: a vocabulary word is a burst word
/// when its binned profile correlates with the key profile at `rho_min` or
/// above and its class is temporal at `beta`. The key token itself is
/// excluded, as are words whose correlation is undefined.
///
/// `key_vec` must have `config.bin_count` entries.
pub fn extract_burst_words(
    edge: &Edge,
    key_vec: &FrequencyVector,
    config: &TimeBinConfig,
    rho_min: f64,
    beta: f64,
) -> BurstSet {
    assert_eq!(
        key_vec.counts.len(),
        config.bin_count,
        "key profile length must equal the configured bin count"
    );
    // Tokenize each interaction once, then count per word.
    let binned: Vec<(Option<usize>, Vec<String>)> = edge
        .interactions
        .iter()
        .map(|i| (config.bin_of(i.timestamp), tokenize(&i.text)))
        .collect();
    let vocabulary: BTreeSet<&str> = binned
        .iter()
        .flat_map(|(_, tokens)| tokens.iter().map(String::as_str))
        .collect();
    let mut words = BTreeSet::new();
    let mut scores = BTreeMap::new();
    for word in vocabulary {
        if word == key_vec.word {
            continue;
        }
        let mut counts = vec![0u64; config.bin_count];
        for (bin, tokens) in &binned {
            if let Some(bin) = bin {
                counts[*bin] += tokens.iter().filter(|t| *t == word).count() as u64;
            }
        }
        let vec = FrequencyVector::new(word, counts);
        let correlation = match pearson(&vec, key_vec) {
            Ok(r) => r,
            Err(_) => continue,
        };
        if correlation < rho_min {
            continue;
        }
        let report = burstiness_classify(&vec, beta);
        if report.class != TopicClass::Temporal {
            continue;
        }
        scores.insert(
            word.to_string(),
            WordScore {
                correlation,
                burstiness: report.burstiness,
            },
        );
        words.insert(word.to_string());
    }
    BurstSet {
        edge: (edge.u().clone(), edge.v().clone()),
        key: ContextKey::from_token(key_vec.word.clone()),
        words,
        scores,
    }
}

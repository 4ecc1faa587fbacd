//! Command-line surface for the detection pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 input/parse error, 3 detection
//! error (for example a context key absent from the corpus). Results go to
//! `--out` or stdout; diagnostics only ever go to stderr.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use ilscm_core::community::{
    detect, detect_from_matrix, DetectionConfig, DetectionMode, DEFAULT_BETA, DEFAULT_BIN_WIDTH,
    DEFAULT_RHO_MIN,
};
use ilscm_core::graph::SocialGraph;
use ilscm_core::io::{self, ExportFormat};
use ilscm_core::synth::{evaluate, generate, SynthParams};
use ilscm_core::text::{
    burstiness_classify, ensure_stopwords, word_profile, ContextKey, TimeBinConfig,
};
use ilscm_core::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "ilscm",
    about = "Burst-word community detection over social graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Detect communities from a graph document and context keys.
    Detect(DetectArgs),
    /// Emit the full weighted adjacency matrix as CSV.
    Matrix(MatrixArgs),
    /// Detect communities from a precomputed weight matrix.
    DetectFromMatrix(DetectFromMatrixArgs),
    /// Generate a synthetic graph with a planted burst community.
    Synth(SynthArgs),
    /// Score a detection result against generator ground truth.
    Evaluate(EvaluateArgs),
    /// Classify every corpus word as temporal or stable.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct CorpusArgs {
    /// Graph document path.
    #[arg(long)]
    graph: PathBuf,
    /// Key file path (one key per line, '#' comments allowed).
    #[arg(long)]
    keys: Option<PathBuf>,
    /// Inline context key; repeatable.
    #[arg(long = "key")]
    key: Vec<String>,
    /// Minimum correlation with the key profile.
    #[arg(long, default_value_t = DEFAULT_RHO_MIN)]
    rho: f64,
    /// Minimum peak-to-mean burstiness for a temporal word.
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Bin width in seconds.
    #[arg(long = "bin-width", default_value_t = DEFAULT_BIN_WIDTH)]
    bin_width: i64,
    /// Bin count; inferred from the corpus time span when omitted.
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Weight (or betweenness) threshold.
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Weight)]
    mode: ModeArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::CommunitiesJson)]
    format: FormatArg,
}

#[derive(Args)]
struct MatrixArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Accepted for parity with detect; the matrix is pre-threshold.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Weight)]
    mode: ModeArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DetectFromMatrixArgs {
    /// Matrix path: adjacency CSV or `<u> <v> <w>` triples.
    #[arg(long)]
    matrix: PathBuf,
    /// Weight (or betweenness) threshold.
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Weight)]
    mode: ModeArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::CommunitiesJson)]
    format: FormatArg,
}

#[derive(Args)]
struct SynthArgs {
    /// Generator parameter file (JSON).
    #[arg(long)]
    params: PathBuf,
    /// Seed override; the params file value is used when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Where to write the generated graph document.
    #[arg(long = "out-graph")]
    out_graph: PathBuf,
    /// Where to write the ground-truth sidecar.
    #[arg(long = "out-truth")]
    out_truth: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Detection result document (communities JSON).
    #[arg(long)]
    result: PathBuf,
    /// Ground-truth sidecar from synth.
    #[arg(long)]
    truth: PathBuf,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Graph document path.
    #[arg(long)]
    graph: PathBuf,
    /// Minimum peak-to-mean burstiness for a temporal word.
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    /// Bin width in seconds.
    #[arg(long = "bin-width", default_value_t = DEFAULT_BIN_WIDTH)]
    bin_width: i64,
    /// Bin count; inferred from the corpus time span when omitted.
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Weight,
    Betweenness,
}

impl From<ModeArg> for DetectionMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Weight => DetectionMode::Weight,
            ModeArg::Betweenness => DetectionMode::VertexBetweenness,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    CommunitiesJson,
    Dot,
}

impl From<FormatArg> for ExportFormat {
    fn from(format: FormatArg) -> Self {
        match format {
            FormatArg::CommunitiesJson => ExportFormat::CommunitiesJson,
            FormatArg::Dot => ExportFormat::Dot,
        }
    }
}

enum CliError {
    Usage(String),
    Input(String),
    Detection(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Detection(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Detection(m) => m,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    ensure_stopwords().map_err(input_err)?;
    match cli.command {
        Command::Detect(args) => run_detect(args),
        Command::Matrix(args) => run_matrix(args),
        Command::DetectFromMatrix(args) => run_detect_from_matrix(args),
        Command::Synth(args) => run_synth(args),
        Command::Evaluate(args) => run_evaluate(args),
        Command::Classify(args) => run_classify(args),
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(bytes)
                .and_then(|_| lock.flush())
                .map_err(input_err)
        }
    }
}

fn collect_keys(args: &CorpusArgs) -> Result<Vec<ContextKey>, CliError> {
    match (&args.keys, args.key.is_empty()) {
        (Some(_), false) => Err(CliError::Usage(
            "use either --keys or --key, not both".to_string(),
        )),
        (None, true) => Err(CliError::Usage(
            "supply context keys with --keys FILE or --key WORD".to_string(),
        )),
        (Some(path), true) => io::parse_keys(&read(path)?).map_err(input_err),
        (None, false) => {
            let mut keys = Vec::new();
            for raw in &args.key {
                let key = ContextKey::new(raw)
                    .map_err(|e| CliError::Usage(format!("--key {raw:?}: {e}")))?;
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
            Ok(keys)
        }
    }
}

fn bins_for(graph: &SocialGraph, bin_width: i64, bins: Option<usize>) -> Result<TimeBinConfig, CliError> {
    if bin_width <= 0 {
        return Err(CliError::Usage(format!(
            "--bin-width must be positive, got {bin_width}"
        )));
    }
    match bins {
        Some(count) => {
            let covering = TimeBinConfig::covering(graph, bin_width).map_err(input_err)?;
            TimeBinConfig::new(covering.origin, bin_width, count)
                .map_err(|e| CliError::Usage(e.to_string()))
        }
        None => TimeBinConfig::covering(graph, bin_width).map_err(input_err),
    }
}

fn corpus_config(args: &CorpusArgs, lambda: f64, mode: ModeArg) -> Result<(SocialGraph, DetectionConfig), CliError> {
    let graph = io::parse_graph(&read(&args.graph)?).map_err(input_err)?;
    let keys = collect_keys(args)?;
    let bins = bins_for(&graph, args.bin_width, args.bins)?;
    let config = DetectionConfig {
        keys,
        lambda,
        mode: mode.into(),
        rho_min: args.rho,
        beta: args.beta,
        bins,
    };
    config.validate().map_err(|e| match e {
        CoreError::NoKeys => CliError::Usage(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;
    Ok((graph, config))
}

fn run_pipeline(graph: &SocialGraph, config: &DetectionConfig) -> Result<ilscm_core::community::DetectionResult, CliError> {
    detect(graph, config).map_err(|e| match e {
        CoreError::UnknownContextKey(_) | CoreError::NoKeys => CliError::Detection(e.to_string()),
        other => CliError::Input(other.to_string()),
    })
}

fn run_detect(args: DetectArgs) -> Result<(), CliError> {
    let (graph, config) = corpus_config(&args.corpus, args.lambda, args.mode)?;
    let result = run_pipeline(&graph, &config)?;
    emit(args.out.as_deref(), &io::export(&result, args.format.into()))
}

fn run_matrix(args: MatrixArgs) -> Result<(), CliError> {
    let lambda = args.lambda.unwrap_or(0.0);
    let (graph, config) = corpus_config(&args.corpus, lambda, args.mode)?;
    let result = run_pipeline(&graph, &config)?;
    emit(args.out.as_deref(), &io::export(&result, ExportFormat::AdjacencyCsv))
}

fn run_detect_from_matrix(args: DetectFromMatrixArgs) -> Result<(), CliError> {
    let adjacency = io::parse_matrix(&read(&args.matrix)?).map_err(input_err)?;
    let result = detect_from_matrix(&adjacency, args.lambda, args.mode.into())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    emit(args.out.as_deref(), &io::export(&result, args.format.into()))
}

fn run_synth(args: SynthArgs) -> Result<(), CliError> {
    let mut params: SynthParams = io::parse_params(&read(&args.params)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.params.display())))?;
    if let Some(seed) = args.seed {
        params.seed = seed;
    }
    let (graph, truth) = generate(&params).map_err(input_err)?;
    emit(Some(&args.out_graph), &io::serialize_graph(&graph))?;
    emit(Some(&args.out_truth), &io::serialize_truth(&truth))
}

fn run_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let result = io::parse_result(&read(&args.result)?).map_err(input_err)?;
    let truth = io::parse_truth(&read(&args.truth)?).map_err(input_err)?;
    let report = evaluate(&result, &truth);
    let mut out = String::new();
    let mut f1_sum = 0.0;
    for m in &report.per_community {
        let matched = m
            .matched
            .map_or("none".to_string(), |id| id.to_string());
        out.push_str(&format!(
            "community {}: matched={} precision={:.6} recall={:.6} f1={:.6} jaccard={:.6}\n",
            m.truth_index, matched, m.precision, m.recall, m.f1, m.jaccard
        ));
        f1_sum += m.f1;
    }
    let mean = if report.per_community.is_empty() {
        0.0
    } else {
        f1_sum / report.per_community.len() as f64
    };
    out.push_str(&format!("mean_f1={mean:.6}\n"));
    out.push_str(&format!(
        "burst_community={} burst_f1={:.6}\n",
        report.burst_community,
        report.burst_f1()
    ));
    emit(None, out.as_bytes())
}

fn run_classify(args: ClassifyArgs) -> Result<(), CliError> {
    if !(args.beta > 1.0) {
        return Err(CliError::Usage(format!(
            "--beta must be greater than 1, got {}",
            args.beta
        )));
    }
    let graph = io::parse_graph(&read(&args.graph)?).map_err(input_err)?;
    let bins = bins_for(&graph, args.bin_width, args.bins)?;

    let mut vocabulary: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
    for edge in graph.edges() {
        vocabulary.extend(ilscm_core::text::edge_vocabulary(edge));
    }
    let mut reports = Vec::with_capacity(vocabulary.len());
    for word in vocabulary {
        let profile = word_profile(&graph, &word, &bins);
        reports.push(burstiness_classify(&profile, args.beta));
    }
    reports.sort_by(|a, b| {
        b.burstiness
            .partial_cmp(&a.burstiness)
            .expect("burstiness is finite")
            .then_with(|| a.word.cmp(&b.word))
    });

    let mut out = String::from("word\tburstiness\tclass\n");
    for report in reports {
        out.push_str(&format!(
            "{}\t{:.6}\t{}\n",
            report.word, report.burstiness, report.class
        ));
    }
    emit(None, out.as_bytes())
}

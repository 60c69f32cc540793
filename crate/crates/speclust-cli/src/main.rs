//! `speclust` — spectral clustering toolkit CLI.
//!
//! Subcommands: `cluster` (run one algorithm on a graph file), `bench`
//! (seeded benchmark sweeps), `score` (compare two label files), `bound`
//! (cluster-recovery bound report), `sim` (build similarity matrices from
//! features), `gen` (generate one benchmark graph), and `read-lfr`
//! (validate and convert a `network.dat`/`community.dat` pair).
//!
//! Exit codes: 0 success, 2 usage or input error, 3 algorithm error.
//! Every seeded command is bit-reproducible: run twice, the JSON output is
//! byte-identical (unless `--timing` is requested, which records wall time).

use clap::{Args, Parser, Subcommand, ValueEnum};
use speclust::benchgen::{generate, BenchError, BenchmarkSpec};
use speclust::cluster::{ClusterError, Linkage, ThresholdRule};
use speclust::eigen::EigenOptions;
use speclust::graph::{connected_components, LaplacianKind, SimilarityMatrix};
use speclust::harness::{
    merge_sweeps, run, sweep, AlgoKind, Axis, HarnessError, RunConfig, SweepConfig, SweepResult,
};
use speclust::io;
use speclust::metrics::{ars, mean_score, nmi, MetricsError};
use speclust::similarity::{
    default_sigma, gaussian_similarity, mahalanobis_sq_similarity, precision_similarity,
};
use speclust::theory::{recovery_bound, TheoryError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "speclust", version, about = "Spectral clustering toolkit", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Laplacian override for spectral algorithms (defaults: unnormalized
    /// for mgm, normalized for g1 and spectral-kmeans).
    #[arg(long, global = true, value_enum)]
    laplacian: Option<LapArg>,
    /// Kernel-classification tolerance factor for the eigensolver
    /// (an eigenvalue below tol·max(1, spectral radius) counts as zero).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// RNG seed for seeded algorithms and the generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format for record-shaped results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Record wall-clock time in run records. Timing varies between runs,
    /// so this opts out of byte-identical output.
    #[arg(long, global = true)]
    timing: bool,
    /// Write the primary output to a file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LapArg {
    Unnormalized,
    Normalized,
}

impl From<LapArg> for LaplacianKind {
    fn from(v: LapArg) -> Self {
        match v {
            LapArg::Unnormalized => LaplacianKind::Unnormalized,
            LapArg::Normalized => LaplacianKind::Normalized,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Mgm,
    G1,
    #[value(name = "spectral-kmeans", alias = "sp-kmeans")]
    SpectralKmeans,
    Kmeans,
    Agglomerative,
}

impl From<AlgoArg> for AlgoKind {
    fn from(v: AlgoArg) -> Self {
        match v {
            AlgoArg::Mgm => AlgoKind::Mgm,
            AlgoArg::G1 => AlgoKind::G1,
            AlgoArg::SpectralKmeans => AlgoKind::SpectralKmeans,
            AlgoArg::Kmeans => AlgoKind::Kmeans,
            AlgoArg::Agglomerative => AlgoKind::Agglomerative,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    /// Dense n×n CSV matrix.
    Matrix,
    /// 1-indexed tab-separated edge list (`network.dat`).
    Edges,
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Gaussian,
    Precision,
    #[value(name = "mahalanobis-sq")]
    MahalanobisSq,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    Mu,
    #[value(name = "d-avg")]
    DAvg,
    N,
}

impl From<AxisArg> for Axis {
    fn from(v: AxisArg) -> Self {
        match v {
            AxisArg::Mu => Axis::Mu,
            AxisArg::DAvg => Axis::DAvg,
            AxisArg::N => Axis::N,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Cluster a graph file with one algorithm; emits a run record.
    Cluster(ClusterArgs),
    /// Sweep an axis of generated benchmark graphs over seeds and score
    /// every algorithm against the planted truth.
    Bench(BenchArgs),
    /// Score one label file against another.
    Score(ScoreArgs),
    /// Evaluate the cluster-recovery bound for a graph and a candidate
    /// partition.
    Bound(BoundArgs),
    /// Build a similarity matrix from feature vectors.
    Sim(SimArgs),
    /// Generate one benchmark graph (network.dat / community.dat pair plus
    /// a JSON metadata sidecar).
    Gen(GenArgs),
    /// Read and validate a network.dat / community.dat pair.
    #[command(name = "read-lfr")]
    ReadLfr(ReadLfrArgs),
}

#[derive(Args)]
struct ClusterArgs {
    /// Graph file: dense CSV matrix or edge list.
    input: PathBuf,
    /// How to parse the input (default: by extension, .csv = matrix,
    /// .dat/.tsv = edges).
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    #[arg(long, value_enum)]
    algorithm: AlgoArg,
    /// Number of eigenvector modes (mgm).
    #[arg(long)]
    modes: Option<usize>,
    /// Number of clusters (spectral-kmeans, kmeans, agglomerative).
    #[arg(long)]
    clusters: Option<usize>,
    /// Threshold rule for g1: mean, median, or a number.
    #[arg(long, default_value = "mean")]
    threshold: String,
    /// Linkage for agglomerative clustering.
    #[arg(long, value_enum, default_value_t = LinkageArg::Average)]
    linkage: LinkageArg,
    /// Ground-truth labels file; when given, scores are included.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinkageArg {
    Average,
    Single,
    Complete,
}

impl From<LinkageArg> for Linkage {
    fn from(v: LinkageArg) -> Self {
        match v {
            LinkageArg::Average => Linkage::Average,
            LinkageArg::Single => Linkage::Single,
            LinkageArg::Complete => Linkage::Complete,
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Swept parameter.
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Comma-separated axis values, e.g. 0.1,0.2,0.3.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    /// Nodes per graph (fixed unless the axis is n).
    #[arg(long, default_value_t = 50)]
    n: usize,
    /// Mean degree (fixed unless the axis is d-avg).
    #[arg(long = "d-avg", default_value_t = 5.0)]
    d_avg: f64,
    /// Maximum degree.
    #[arg(long = "d-max", default_value_t = 20)]
    d_max: usize,
    /// Mixing parameter (fixed unless the axis is mu).
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    /// Degree power-law exponent.
    #[arg(long, default_value_t = 2.0)]
    tau1: f64,
    /// Community-size power-law exponent.
    #[arg(long, default_value_t = 1.0)]
    tau2: f64,
    /// Intra-community edge weight.
    #[arg(long = "intra-weight", default_value_t = 1.0)]
    intra_weight: f64,
    /// Inter-community edge weight.
    #[arg(long = "inter-weight", default_value_t = 1.0)]
    inter_weight: f64,
    /// Node strength exponent (target total weight = degree^beta).
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// First generator seed.
    #[arg(long = "seed-start", default_value_t = 0)]
    seed_start: u64,
    /// Number of seeds (graphs) per axis value.
    #[arg(long = "seed-count", default_value_t = 50)]
    seed_count: u64,
    /// Comma-separated algorithms to run (default: all five).
    #[arg(long, value_enum, value_delimiter = ',')]
    algorithms: Vec<AlgoArg>,
    /// Also write the per-cell aggregate table as CSV to this path.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Merge previously saved sweep JSON files (disjoint seed sets, same
    /// grid) instead of running; the positional inputs are the files.
    #[arg(long, num_args = 1.., value_name = "JSON")]
    merge: Vec<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    /// First labels file (one integer per line).
    a: PathBuf,
    /// Second labels file.
    b: PathBuf,
}

#[derive(Args)]
struct BoundArgs {
    /// Graph file: dense CSV matrix or edge list.
    input: PathBuf,
    #[arg(long, value_enum)]
    input_format: Option<InputFormat>,
    /// Partition to certify (labels file).
    #[arg(long)]
    truth: PathBuf,
}

#[derive(Args)]
struct SimArgs {
    /// Feature CSV (optional `variances,...` first row).
    features: PathBuf,
    #[arg(long, value_enum, default_value_t = KernelArg::Gaussian)]
    kernel: KernelArg,
    /// Kernel bandwidth; defaults to 1e-2.
    #[arg(long)]
    sigma: Option<f64>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 50)]
    n: usize,
    #[arg(long = "d-avg", default_value_t = 5.0)]
    d_avg: f64,
    #[arg(long = "d-max", default_value_t = 20)]
    d_max: usize,
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    #[arg(long, default_value_t = 2.0)]
    tau1: f64,
    #[arg(long, default_value_t = 1.0)]
    tau2: f64,
    #[arg(long = "intra-weight", default_value_t = 1.0)]
    intra_weight: f64,
    #[arg(long = "inter-weight", default_value_t = 1.0)]
    inter_weight: f64,
    /// Node strength exponent (target total weight = degree^beta).
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Directory for network.dat and community.dat.
    #[arg(long = "out-dir", default_value = ".")]
    out_dir: PathBuf,
    /// Filename prefix for the emitted .dat files.
    #[arg(long, default_value = "")]
    prefix: String,
}

#[derive(Args)]
struct ReadLfrArgs {
    network: PathBuf,
    community: PathBuf,
    /// Also write the graph as a dense CSV matrix.
    #[arg(long = "matrix-out")]
    matrix_out: Option<PathBuf>,
    /// Also write the communities as a labels file (0-indexed, one per
    /// line).
    #[arg(long = "labels-out")]
    labels_out: Option<PathBuf>,
}

/// Errors split by exit code.
enum CliError {
    /// Exit 2: bad usage or unreadable/invalid input.
    Input(String),
    /// Exit 3: the algorithm itself failed on valid input.
    Algorithm(String),
}

impl From<io::IoError> for CliError {
    fn from(e: io::IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ClusterError> for CliError {
    fn from(e: ClusterError) -> Self {
        CliError::Algorithm(e.to_string())
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            // A truth/input length mismatch is an input problem.
            HarnessError::Metrics(m) => CliError::Input(m.to_string()),
            HarnessError::Cluster(c) => CliError::Algorithm(c.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<BenchError> for CliError {
    fn from(e: BenchError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<TheoryError> for CliError {
    fn from(e: TheoryError) -> Self {
        match e {
            TheoryError::DimensionMismatch { .. } | TheoryError::BadIndex { .. } => {
                CliError::Input(e.to_string())
            }
            other => CliError::Algorithm(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Ctx {
        laplacian: cli.laplacian.map(Into::into),
        eigen: match cli.tol {
            Some(t) => EigenOptions { zero_tol_factor: t },
            None => EigenOptions::default(),
        },
        seed: cli.seed,
        format: cli.format,
        timing: cli.timing,
        output: cli.output,
    };
    let result = match cli.cmd {
        Cmd::Cluster(args) => cmd_cluster(args, &ctx),
        Cmd::Bench(args) => cmd_bench(args, &ctx),
        Cmd::Score(args) => cmd_score(args, &ctx),
        Cmd::Bound(args) => cmd_bound(args, &ctx),
        Cmd::Sim(args) => cmd_sim(args, &ctx),
        Cmd::Gen(args) => cmd_gen(args, &ctx),
        Cmd::ReadLfr(args) => cmd_read_lfr(args, &ctx),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Algorithm(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

struct Ctx {
    laplacian: Option<LaplacianKind>,
    eigen: EigenOptions,
    seed: u64,
    format: Format,
    timing: bool,
    output: Option<PathBuf>,
}

impl Ctx {
    /// Send the primary output to the file or stdout.
    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.output {
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn read_graph(path: &Path, fmt: Option<InputFormat>) -> Result<SimilarityMatrix, CliError> {
    let fmt = match fmt {
        Some(f) => f,
        None => match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => InputFormat::Matrix,
            Some("dat") | Some("tsv") | Some("txt") => InputFormat::Edges,
            _ => {
                return Err(CliError::Input(format!(
                    "cannot infer format of {} — pass --input-format matrix|edges",
                    path.display()
                )))
            }
        },
    };
    Ok(match fmt {
        InputFormat::Matrix => io::read_matrix_csv(path)?,
        InputFormat::Edges => io::read_edge_tsv(path)?,
    })
}

fn cmd_cluster(args: ClusterArgs, ctx: &Ctx) -> Result<(), CliError> {
    let kind: AlgoKind = args.algorithm.into();
    // Usage-level parameter checks (exit 2); deeper n-dependent checks are
    // the algorithm's own errors (exit 3).
    if matches!(kind, AlgoKind::Mgm) {
        match args.modes {
            Some(0) => return Err(CliError::Input("--modes must be at least 1".into())),
            None => return Err(CliError::Input("mgm requires --modes".into())),
            _ => {}
        }
    }
    if matches!(kind, AlgoKind::SpectralKmeans | AlgoKind::Kmeans | AlgoKind::Agglomerative) {
        match args.clusters {
            Some(k) if k < 2 => {
                return Err(CliError::Input("--clusters must be at least 2".into()))
            }
            None => return Err(CliError::Input(format!("{} requires --clusters", kind.id()))),
            _ => {}
        }
    }
    let threshold = match args.threshold.as_str() {
        "mean" => ThresholdRule::Mean,
        "median" => ThresholdRule::Median,
        other => match other.parse::<f64>() {
            Ok(v) if v.is_finite() => ThresholdRule::Fixed(v),
            _ => {
                return Err(CliError::Input(format!(
                    "--threshold must be mean, median, or a number, got {other:?}"
                )))
            }
        },
    };
    let graph = read_graph(&args.input, args.input_format)?;
    let truth = args.truth.as_deref().map(io::read_labels).transpose()?;
    let mut rc = RunConfig::new(kind);
    rc.m = args.modes;
    rc.k = args.clusters;
    rc.laplacian = ctx.laplacian;
    rc.seed = Some(ctx.seed);
    rc.threshold = threshold;
    rc.linkage = args.linkage.into();
    rc.eigen = ctx.eigen.clone();
    rc.timing = ctx.timing;
    let record = run(&graph, &rc, truth.as_ref(), &args.input.display().to_string())?;
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
    match ctx.format {
        Format::Json => ctx.emit(&to_json(&record)),
        Format::Csv => {
            let mut text = String::from("node,label\n");
            if let Some(labels) = &record.labels {
                for (i, l) in labels.iter().enumerate() {
                    text.push_str(&format!("{i},{l}\n"));
                }
            }
            ctx.emit(&text)
        }
    }
}

fn sweep_table(res: &SweepResult) -> String {
    let mut out = String::from(
        "axis,value,algorithm,successes,failures,nmi_mean,nmi_std,ars_mean,ars_std,score_mean,score_std,k_mean\n",
    );
    for c in &res.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            res.axis,
            io::format_float(c.value),
            c.algorithm,
            c.successes,
            c.failures,
            io::format_float(c.nmi_mean),
            io::format_float(c.nmi_std),
            io::format_float(c.ars_mean),
            io::format_float(c.ars_std),
            io::format_float(c.score_mean),
            io::format_float(c.score_std),
            io::format_float(c.k_mean),
        ));
    }
    out
}

fn cmd_bench(args: BenchArgs, ctx: &Ctx) -> Result<(), CliError> {
    let result: SweepResult = if !args.merge.is_empty() {
        let mut parts = Vec::new();
        for path in &args.merge {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            let part: SweepResult = serde_json::from_str(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            parts.push(part);
        }
        merge_sweeps(&parts).ok_or_else(|| {
            CliError::Input(
                "sweeps cannot merge: differing grids or overlapping seed sets".into(),
            )
        })?
    } else {
        if args.values.is_empty() {
            return Err(CliError::Input("--values must not be empty".into()));
        }
        if args.seed_count == 0 {
            return Err(CliError::Input("--seed-count must be at least 1".into()));
        }
        let mut base = BenchmarkSpec::new(args.n, args.d_avg, args.d_max, args.mu, 0);
        base.tau1 = args.tau1;
        base.tau2 = args.tau2;
        base.intra_weight = args.intra_weight;
        base.inter_weight = args.inter_weight;
        base.beta = args.beta;
        let algorithms: Vec<AlgoKind> = if args.algorithms.is_empty() {
            AlgoKind::ALL.to_vec()
        } else {
            args.algorithms.iter().map(|&a| a.into()).collect()
        };
        let cfg = SweepConfig {
            axis: args.axis.into(),
            values: args.values.clone(),
            base,
            seeds: (args.seed_start..args.seed_start + args.seed_count).collect(),
            algorithms,
            eigen: ctx.eigen.clone(),
            timing: ctx.timing,
        };
        sweep(&cfg)
    };
    if let Some(table) = &args.table {
        std::fs::write(table, sweep_table(&result))
            .map_err(|e| CliError::Input(format!("{}: {e}", table.display())))?;
    }
    match ctx.format {
        Format::Json => ctx.emit(&to_json(&result)),
        Format::Csv => ctx.emit(&sweep_table(&result)),
    }
}

fn cmd_score(args: ScoreArgs, ctx: &Ctx) -> Result<(), CliError> {
    let a = io::read_labels(&args.a)?;
    let b = io::read_labels(&args.b)?;
    let scores = speclust::harness::Scores {
        nmi: nmi(&a, &b)?,
        ars: ars(&a, &b)?,
        mean: mean_score(&a, &b)?,
    };
    match ctx.format {
        Format::Json => ctx.emit(&to_json(&scores)),
        Format::Csv => ctx.emit(&format!(
            "nmi,ars,mean\n{},{},{}\n",
            io::format_float(scores.nmi),
            io::format_float(scores.ars),
            io::format_float(scores.mean)
        )),
    }
}

fn cmd_bound(args: BoundArgs, ctx: &Ctx) -> Result<(), CliError> {
    let graph = read_graph(&args.input, args.input_format)?;
    let truth = io::read_labels(&args.truth)?;
    let report = recovery_bound(&graph, &truth)?;
    ctx.emit(&to_json(&report))
}

fn cmd_sim(args: SimArgs, ctx: &Ctx) -> Result<(), CliError> {
    let features = io::read_features_csv(&args.features)?;
    let sigma = args.sigma.unwrap_or_else(default_sigma);
    let matrix = match args.kernel {
        KernelArg::Gaussian => {
            gaussian_similarity(&features, sigma).map_err(|e| CliError::Input(e.to_string()))?
        }
        KernelArg::Precision => {
            let (m, warnings) = precision_similarity(&features, sigma)
                .map_err(|e| CliError::Input(e.to_string()))?;
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            m
        }
        KernelArg::MahalanobisSq => mahalanobis_sq_similarity(&features, sigma)
            .map_err(|e| CliError::Input(e.to_string()))?,
    };
    ctx.emit(&io::matrix_to_csv(&matrix))
}

fn cmd_gen(args: GenArgs, ctx: &Ctx) -> Result<(), CliError> {
    let mut spec = BenchmarkSpec::new(args.n, args.d_avg, args.d_max, args.mu, ctx.seed);
    spec.tau1 = args.tau1;
    spec.tau2 = args.tau2;
    spec.intra_weight = args.intra_weight;
    spec.inter_weight = args.inter_weight;
    spec.beta = args.beta;
    let (labeled, meta) = generate(&spec)?;
    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.out_dir.display())))?;
    let network = args.out_dir.join(format!("{}network.dat", args.prefix));
    let community = args.out_dir.join(format!("{}community.dat", args.prefix));
    io::write_lfr(&network, &community, &labeled.graph, &labeled.truth)?;
    ctx.emit(&to_json(&meta))
}

#[derive(serde::Serialize)]
struct LfrSummary {
    n: usize,
    edges: usize,
    communities: usize,
    components: usize,
    realized_mu: f64,
}

fn cmd_read_lfr(args: ReadLfrArgs, ctx: &Ctx) -> Result<(), CliError> {
    let (graph, truth) = io::read_lfr(&args.network, &args.community)?;
    let labeled = speclust::benchgen::LabeledGraph { graph, truth };
    let realized_mu = speclust::benchgen::realized_mixing(&labeled)?;
    let summary = LfrSummary {
        n: labeled.graph.n(),
        edges: labeled.graph.edges().len(),
        communities: labeled.truth.k(),
        components: connected_components(&labeled.graph).k(),
        realized_mu,
    };
    if let Some(path) = &args.matrix_out {
        io::write_matrix_csv(path, &labeled.graph)?;
    }
    if let Some(path) = &args.labels_out {
        io::write_labels(path, &labeled.truth)?;
    }
    ctx.emit(&to_json(&summary))
}

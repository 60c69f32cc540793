//! Benchmark harness: run any clustering algorithm on a graph, score it
//! against ground truth, and sweep an axis (mixing, mean degree, or size)
//! over seeds with order-independent aggregation.

use crate::benchgen::{generate, BenchmarkSpec};
use crate::cluster::{
    agglomerative, kmeans, sp_g1_with, sp_kmeans_with, sp_mgm_with, ClusterError, Linkage,
    ThresholdRule,
};
use crate::eigen::EigenOptions;
use crate::graph::{LaplacianKind, SimilarityMatrix};
use crate::metrics::{ars, mean_score, nmi, MetricsError};
use crate::partition::Clustering;
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HarnessError {
    /// The algorithm itself failed (degenerate split, zero row, bad
    /// parameters, eigensolver trouble).
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    /// The supplied truth does not match the input.
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

/// Which algorithm to run; per-run parameters (m, k, seed) are supplied at
/// run time so sweeps can derive them from the ground truth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgoKind {
    Mgm,
    G1,
    SpectralKmeans,
    Kmeans,
    Agglomerative,
}

impl AlgoKind {
    pub fn id(self) -> &'static str {
        match self {
            AlgoKind::Mgm => "sp-mgm",
            AlgoKind::G1 => "sp-g1",
            AlgoKind::SpectralKmeans => "sp-kmeans",
            AlgoKind::Kmeans => "kmeans",
            AlgoKind::Agglomerative => "agglomerative",
        }
    }

    /// The Laplacian each algorithm uses unless overridden.
    pub fn default_laplacian(self) -> Option<LaplacianKind> {
        match self {
            AlgoKind::Mgm => Some(LaplacianKind::Unnormalized),
            AlgoKind::G1 | AlgoKind::SpectralKmeans => Some(LaplacianKind::Normalized),
            AlgoKind::Kmeans | AlgoKind::Agglomerative => None,
        }
    }

    pub const ALL: [AlgoKind; 5] = [
        AlgoKind::Mgm,
        AlgoKind::G1,
        AlgoKind::SpectralKmeans,
        AlgoKind::Kmeans,
        AlgoKind::Agglomerative,
    ];
}

/// A fully-specified single run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub kind: AlgoKind,
    /// Mode count for the gap-cut algorithm.
    pub m: Option<usize>,
    /// Cluster count for the k-targeting algorithms.
    pub k: Option<usize>,
    /// Laplacian override; None picks the algorithm's default.
    pub laplacian: Option<LaplacianKind>,
    /// RNG seed for the k-means-based algorithms.
    pub seed: Option<u64>,
    pub threshold: ThresholdRule,
    pub linkage: Linkage,
    pub eigen: EigenOptions,
    /// Record wall time (off by default: timing breaks byte-identical
    /// output).
    pub timing: bool,
}

impl RunConfig {
    pub fn new(kind: AlgoKind) -> Self {
        RunConfig {
            kind,
            m: None,
            k: None,
            laplacian: None,
            seed: None,
            threshold: ThresholdRule::default(),
            linkage: Linkage::default(),
            eigen: EigenOptions::default(),
            timing: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Scores {
    pub nmi: f64,
    pub ars: f64,
    pub mean: f64,
}

/// Parameters echoed into the run record.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RecordParams {
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub laplacian: Option<String>,
    pub seed: Option<u64>,
}

/// One algorithm run: what ran, on what, what it found, and how it scored.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub params: RecordParams,
    pub input: String,
    pub n: usize,
    /// Found labels; None when the run failed.
    pub labels: Option<Vec<usize>>,
    /// Number of clusters found; None when the run failed.
    pub k_found: Option<usize>,
    /// Scores against truth; None when no truth was supplied or the run
    /// failed.
    pub scores: Option<Scores>,
    /// Milliseconds, present only when timing was requested.
    pub wall_ms: Option<f64>,
    pub warnings: Vec<String>,
}

fn laplacian_name(kind: LaplacianKind) -> &'static str {
    match kind {
        LaplacianKind::Unnormalized => "unnormalized",
        LaplacianKind::Normalized => "normalized",
    }
}

/// Run one algorithm on one graph. Algorithm errors propagate; the sweep
/// driver downgrades them to failure records.
pub fn run(
    graph: &SimilarityMatrix,
    cfg: &RunConfig,
    truth: Option<&Clustering>,
    input: &str,
) -> Result<RunRecord, HarnessError> {
    let kind = cfg.kind;
    let lap = cfg.laplacian.or(kind.default_laplacian());
    let started = Instant::now();
    let (clustering, warnings): (Clustering, Vec<String>) = match kind {
        AlgoKind::Mgm => {
            let m = cfg.m.unwrap_or(1);
            let out = sp_mgm_with(graph, m, lap.unwrap(), &cfg.eigen)?;
            (out.clustering, out.warnings.iter().map(|w| w.to_string()).collect())
        }
        AlgoKind::G1 => {
            let out = sp_g1_with(graph, cfg.threshold, lap.unwrap(), &cfg.eigen)?;
            (out.clustering, out.warnings.iter().map(|w| w.to_string()).collect())
        }
        AlgoKind::SpectralKmeans => {
            let k = cfg.k.unwrap_or(2);
            let out = sp_kmeans_with(graph, k, cfg.seed.unwrap_or(0), lap.unwrap(), &cfg.eigen)?;
            (out.clustering, out.warnings.iter().map(|w| w.to_string()).collect())
        }
        AlgoKind::Kmeans => {
            let k = cfg.k.unwrap_or(2);
            let c = kmeans(graph.as_matrix(), k, cfg.seed.unwrap_or(0))?;
            (c, Vec::new())
        }
        AlgoKind::Agglomerative => {
            let k = cfg.k.unwrap_or(2);
            let c = agglomerative(graph.as_matrix(), k, cfg.linkage)?;
            (c, Vec::new())
        }
    };
    let wall_ms = cfg.timing.then(|| started.elapsed().as_secs_f64() * 1e3);
    // Records carry first-occurrence labels so the output does not depend
    // on internal naming (eigenvector sign, centroid index order).
    let clustering = clustering.canonical();
    let scores = match truth {
        Some(t) => Some(Scores {
            nmi: nmi(&clustering, t)?,
            ars: ars(&clustering, t)?,
            mean: mean_score(&clustering, t)?,
        }),
        None => None,
    };
    Ok(RunRecord {
        algorithm: kind.id().to_string(),
        params: RecordParams {
            m: match kind {
                AlgoKind::Mgm => Some(cfg.m.unwrap_or(1)),
                _ => None,
            },
            k: match kind {
                AlgoKind::SpectralKmeans | AlgoKind::Kmeans | AlgoKind::Agglomerative => {
                    Some(cfg.k.unwrap_or(2))
                }
                _ => None,
            },
            laplacian: lap.map(|l| laplacian_name(l).to_string()),
            seed: match kind {
                AlgoKind::SpectralKmeans | AlgoKind::Kmeans => Some(cfg.seed.unwrap_or(0)),
                _ => None,
            },
        },
        input: input.to_string(),
        n: graph.n(),
        k_found: Some(clustering.k()),
        labels: Some(clustering.labels().to_vec()),
        scores,
        wall_ms,
        warnings,
    })
}

/// The swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Mu,
    DAvg,
    N,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Mu => "mu",
            Axis::DAvg => "d_avg",
            Axis::N => "n",
        }
    }

    fn apply(self, base: &BenchmarkSpec, value: f64) -> BenchmarkSpec {
        let mut spec = base.clone();
        match self {
            Axis::Mu => spec.mu = value,
            Axis::DAvg => spec.d_avg = value,
            Axis::N => spec.n = value.round() as usize,
        }
        spec
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub axis: Axis,
    pub values: Vec<f64>,
    /// Fixed generator parameters; the axis field and seed are overwritten
    /// per run.
    pub base: BenchmarkSpec,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<AlgoKind>,
    pub eigen: EigenOptions,
    pub timing: bool,
}

/// JSON has no NaN: a cell with zero successes keeps NaN statistics in
/// memory, which serialize as `null` and must parse back to NaN.
mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
    }
}

/// Aggregate of the successful runs in one (axis value, algorithm) cell.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub value: f64,
    pub algorithm: String,
    pub successes: usize,
    pub failures: usize,
    #[serde(with = "nan_as_null")]
    pub nmi_mean: f64,
    #[serde(with = "nan_as_null")]
    pub nmi_std: f64,
    #[serde(with = "nan_as_null")]
    pub ars_mean: f64,
    #[serde(with = "nan_as_null")]
    pub ars_std: f64,
    #[serde(with = "nan_as_null")]
    pub score_mean: f64,
    #[serde(with = "nan_as_null")]
    pub score_std: f64,
    /// Mean number of clusters found (over successes).
    #[serde(with = "nan_as_null")]
    pub k_mean: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepResult {
    pub axis: String,
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
    pub base: BenchmarkSpec,
    pub cells: Vec<SweepCell>,
    /// Every individual run, including failures (null labels/scores).
    pub runs: Vec<SweepRun>,
}

/// A run record tagged with its position in the sweep grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRun {
    pub value: f64,
    pub seed: u64,
    #[serde(flatten)]
    pub record: RunRecord,
}

/// Run the full grid: for each axis value and seed, generate one graph and
/// run every algorithm on it, feeding spectral algorithms the true cluster
/// count (m = k_true − 1 for the gap-cut algorithm). Failed runs are
/// recorded with null labels and scores plus a warning; they never abort
/// the sweep.
pub fn sweep(cfg: &SweepConfig) -> SweepResult {
    let mut runs: Vec<SweepRun> = Vec::new();
    for &value in &cfg.values {
        for &seed in &cfg.seeds {
            let mut spec = cfg.axis.apply(&cfg.base, value);
            spec.seed = seed;
            let input = format!("bench:{}={} seed={}", cfg.axis.name(), value, seed);
            let generated = generate(&spec);
            for &kind in &cfg.algorithms {
                let record = match &generated {
                    Ok((labeled, _)) => {
                        let k_true = labeled.truth.k();
                        let mut rc = RunConfig::new(kind);
                        rc.m = Some(k_true.saturating_sub(1).max(1));
                        rc.k = Some(k_true.max(2));
                        rc.seed = Some(seed);
                        rc.eigen = cfg.eigen.clone();
                        rc.timing = cfg.timing;
                        run(&labeled.graph, &rc, Some(&labeled.truth), &input)
                            .unwrap_or_else(|e| failure_record(kind, &spec, &input, e.to_string()))
                    }
                    Err(e) => failure_record(kind, &spec, &input, e.to_string()),
                };
                runs.push(SweepRun { value, seed, record });
            }
        }
    }
    let cells = aggregate(&cfg.values, &cfg.algorithms, &runs);
    SweepResult {
        axis: cfg.axis.name().to_string(),
        values: cfg.values.clone(),
        seeds: cfg.seeds.clone(),
        base: cfg.base.clone(),
        cells,
        runs,
    }
}

fn failure_record(kind: AlgoKind, spec: &BenchmarkSpec, input: &str, msg: String) -> RunRecord {
    RunRecord {
        algorithm: kind.id().to_string(),
        params: RecordParams { m: None, k: None, laplacian: None, seed: Some(spec.seed) },
        input: input.to_string(),
        n: spec.n,
        labels: None,
        k_found: None,
        scores: None,
        wall_ms: None,
        warnings: vec![msg],
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
    (mean, var.sqrt())
}

fn aggregate(values: &[f64], algorithms: &[AlgoKind], runs: &[SweepRun]) -> Vec<SweepCell> {
    let mut cells = Vec::new();
    for &value in values {
        for &kind in algorithms {
            let id = kind.id();
            let in_cell: Vec<&SweepRun> = runs
                .iter()
                .filter(|r| r.value == value && r.record.algorithm == id)
                .collect();
            let ok: Vec<&&SweepRun> = in_cell.iter().filter(|r| r.record.scores.is_some()).collect();
            let pick = |f: fn(&Scores) -> f64| -> Vec<f64> {
                ok.iter().map(|r| f(r.record.scores.as_ref().unwrap())).collect()
            };
            let (nmi_mean, nmi_std) = mean_std(&pick(|s| s.nmi));
            let (ars_mean, ars_std) = mean_std(&pick(|s| s.ars));
            let (score_mean, score_std) = mean_std(&pick(|s| s.mean));
            let ks: Vec<f64> = ok.iter().map(|r| r.record.k_found.unwrap() as f64).collect();
            let (k_mean, _) = mean_std(&ks);
            cells.push(SweepCell {
                value,
                algorithm: id.to_string(),
                successes: ok.len(),
                failures: in_cell.len() - ok.len(),
                nmi_mean,
                nmi_std,
                ars_mean,
                ars_std,
                score_mean,
                score_std,
                k_mean,
            });
        }
    }
    cells
}

/// Merge sweeps over disjoint seed sets into one result; the grid and base
/// spec must match. Runs are re-sorted by (value, seed) and the aggregates
/// recomputed, so merging partitioned invocations reproduces a single
/// invocation up to floating-point summation order.
pub fn merge_sweeps(parts: &[SweepResult]) -> Option<SweepResult> {
    let first = parts.first()?;
    let mut seeds: Vec<u64> = Vec::new();
    let mut runs: Vec<SweepRun> = Vec::new();
    for p in parts {
        if p.axis != first.axis || p.values != first.values || p.base != first.base {
            return None;
        }
        seeds.extend(&p.seeds);
        runs.extend(p.runs.iter().cloned());
    }
    let mut order: Vec<u64> = seeds.clone();
    order.sort_unstable();
    order.dedup();
    if order.len() != seeds.len() {
        return None; // overlapping seed sets
    }
    seeds.sort_unstable();
    let value_rank = |v: f64| first.values.iter().position(|&x| x == v).unwrap_or(usize::MAX);
    // Stable sort on (value, seed) only: each (value, seed) group comes from
    // exactly one part (seed sets are disjoint), so its internal algorithm
    // order — the execution order — is preserved, and the merged run list
    // matches what a single invocation over all seeds would produce.
    runs.sort_by(|a, b| {
        value_rank(a.value).cmp(&value_rank(b.value)).then(a.seed.cmp(&b.seed))
    });
    let algorithms: Vec<AlgoKind> = AlgoKind::ALL
        .iter()
        .copied()
        .filter(|k| runs.iter().any(|r| r.record.algorithm == k.id()))
        .collect();
    let cells = aggregate(&first.values, &algorithms, &runs);
    Some(SweepResult {
        axis: first.axis.clone(),
        values: first.values.clone(),
        seeds,
        base: first.base.clone(),
        cells,
        runs,
    })
}

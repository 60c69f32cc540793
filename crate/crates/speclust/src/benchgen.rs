//! Labeled benchmark graphs: a self-contained generator with power-law
//! degrees, power-law community sizes, and a per-node mixing target, plus
//! realized-statistics helpers. File interchange with the external benchmark
//! format lives in [`crate::io`].
//!
//! The generator is "lite": it reproduces the distributional knobs (n,
//! d_avg, d_max, mu, exponents) and is judged by realized statistics rather
//! than by structural equivalence with any particular reference
//! implementation. All randomness flows from the seed.

use crate::graph::{connected_components, induced_subgraph, GraphError, SimilarityMatrix};
use crate::partition::{Clustering, PartitionError};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BenchError {
    #[error("invalid benchmark spec: {0}")]
    InvalidSpec(String),
    #[error("no truncated power law with exponent {tau1} and maximum {d_max} attains mean degree {d_avg}")]
    InfeasibleSpec { tau1: f64, d_avg: f64, d_max: usize },
    #[error("graph has no edges")]
    EmptyGraph,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Parameters of one benchmark graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSpec {
    pub n: usize,
    /// Target mean degree.
    pub d_avg: f64,
    /// Hard maximum degree.
    pub d_max: usize,
    /// Mixing parameter: target fraction of each node's edges that leave its
    /// community.
    pub mu: f64,
    /// Degree power-law exponent.
    pub tau1: f64,
    /// Community-size power-law exponent.
    pub tau2: f64,
    /// Strength exponent: node i's target total edge weight is
    /// degree_i^beta. The default 1.0 keeps each node's mean incident
    /// weight at the configured scales; 1.5 concentrates weight on hubs.
    #[serde(default = "default_beta")]
    pub beta: f64,
    pub seed: u64,
    pub intra_weight: f64,
    pub inter_weight: f64,
}

fn default_beta() -> f64 {
    1.0
}

impl BenchmarkSpec {
    /// Spec with conventional exponents (degrees 2, sizes 1) and unit weights.
    pub fn new(n: usize, d_avg: f64, d_max: usize, mu: f64, seed: u64) -> Self {
        BenchmarkSpec {
            n,
            d_avg,
            d_max,
            mu,
            tau1: 2.0,
            tau2: 1.0,
            beta: default_beta(),
            seed,
            intra_weight: 1.0,
            inter_weight: 1.0,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let fail = |msg: String| Err(BenchError::InvalidSpec(msg));
        if self.n < 4 {
            return fail(format!("need at least 4 nodes, got {}", self.n));
        }
        if !(self.d_avg >= 1.0 && self.d_avg.is_finite()) {
            return fail(format!("d_avg must be at least 1, got {}", self.d_avg));
        }
        if (self.d_avg > self.d_max as f64) || self.d_max >= self.n {
            return fail(format!(
                "need 1 <= d_avg <= d_max < n, got d_avg {}, d_max {}, n {}",
                self.d_avg, self.d_max, self.n
            ));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return fail(format!("mu must lie in [0, 1], got {}", self.mu));
        }
        if !(self.tau1.is_finite() && self.tau1 > 0.0) {
            return fail(format!("tau1 must be positive, got {}", self.tau1));
        }
        if !(self.tau2.is_finite() && self.tau2 >= 0.0) {
            return fail(format!("tau2 must be nonnegative, got {}", self.tau2));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return fail(format!("beta must be positive, got {}", self.beta));
        }
        if !(self.intra_weight > 0.0 && self.inter_weight > 0.0) {
            return fail("edge weights must be positive".to_string());
        }
        Ok(())
    }
}

/// A graph with ground-truth community labels.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub graph: SimilarityMatrix,
    pub truth: Clustering,
}

/// Realized statistics of a generated graph, for the JSON sidecar.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenMeta {
    pub spec: BenchmarkSpec,
    /// Mean unweighted degree of the returned graph.
    pub realized_d_avg: f64,
    /// Weighted inter-community edge fraction of the returned graph.
    pub realized_mu: f64,
    /// Nodes discarded by largest-component retention.
    pub dropped_nodes: usize,
    pub communities: usize,
}

/// Mean of the truncated continuous power law with density ∝ x^−tau on
/// [a, b].
fn truncated_power_mean(tau: f64, a: f64, b: f64) -> f64 {
    if (b - a).abs() < 1e-12 {
        return b;
    }
    if (tau - 1.0).abs() < 1e-9 {
        (b - a) / (b / a).ln()
    } else if (tau - 2.0).abs() < 1e-9 {
        a * b * (b / a).ln() / (b - a)
    } else {
        let p = 1.0 - tau;
        let q = 2.0 - tau;
        (p / q) * (b.powf(q) - a.powf(q)) / (b.powf(p) - a.powf(p))
    }
}

/// Find the lower truncation point that makes the distribution's mean hit
/// `target`; the mean grows monotonically with the lower endpoint.
fn solve_lower_cut(tau: f64, target: f64, b: f64) -> Option<f64> {
    if target >= b {
        return Some(b);
    }
    let mut lo = 1e-9 * b;
    let mut hi = b;
    if truncated_power_mean(tau, lo, b) > target {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if truncated_power_mean(tau, mid, b) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Inverse-CDF sample of the truncated power law.
fn sample_power(tau: f64, a: f64, b: f64, rng: &mut ChaCha8Rng) -> f64 {
    if (b - a).abs() < 1e-12 {
        return b;
    }
    let u: f64 = rng.gen();
    if (tau - 1.0).abs() < 1e-9 {
        a * (b / a).powf(u)
    } else {
        let p = 1.0 - tau;
        (a.powf(p) + u * (b.powf(p) - a.powf(p))).powf(1.0 / p)
    }
}

/// Pair up stubs uniformly, rejecting self-loops, repeated edges, and pairs
/// failing `allowed`. Stubs that keep colliding are spliced in by
/// double-edge swaps (replace an existing edge (x, y) with (u, x) and
/// (v, y)), which preserves the degrees of x and y; whatever still cannot be
/// placed after bounded retries is dropped.
fn pair_stubs(
    mut stubs: Vec<usize>,
    edges: &mut BTreeSet<(usize, usize)>,
    allowed: impl Fn(usize, usize) -> bool,
    rng: &mut ChaCha8Rng,
) {
    for _round in 0..20 {
        if stubs.len() < 2 {
            break;
        }
        // Fisher-Yates shuffle.
        for i in (1..stubs.len()).rev() {
            let j = rng.gen_range(0..=i);
            stubs.swap(i, j);
        }
        let mut leftover = Vec::new();
        if stubs.len() % 2 == 1 {
            leftover.push(stubs.pop().unwrap());
        }
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !allowed(u, v) || !edges.insert((u, v)) {
                leftover.push(pair[0]);
                leftover.push(pair[1]);
            }
        }
        stubs = leftover;
    }
    // Splice the stragglers in by edge swaps.
    let mut attempts = 0;
    while stubs.len() >= 2 && attempts < 500 && !edges.is_empty() {
        attempts += 1;
        let i = rng.gen_range(0..stubs.len());
        let u = stubs.swap_remove(i);
        let j = rng.gen_range(0..stubs.len());
        let v = stubs.swap_remove(j);
        let (lo, hi) = (u.min(v), u.max(v));
        if lo != hi && allowed(lo, hi) && edges.insert((lo, hi)) {
            continue;
        }
        let pool: Vec<(usize, usize)> = edges.iter().copied().collect();
        let mut placed = false;
        'search: for _ in 0..50 {
            let (x, y) = pool[rng.gen_range(0..pool.len())];
            for (p, q, r, s) in [(u, x, v, y), (u, y, v, x)] {
                let e1 = (p.min(q), p.max(q));
                let e2 = (r.min(s), r.max(s));
                if e1.0 != e1.1
                    && e2.0 != e2.1
                    && e1 != e2
                    && allowed(e1.0, e1.1)
                    && allowed(e2.0, e2.1)
                    && !edges.contains(&e1)
                    && !edges.contains(&e2)
                    && edges.contains(&(x, y))
                {
                    edges.remove(&(x, y));
                    edges.insert(e1);
                    edges.insert(e2);
                    placed = true;
                    break 'search;
                }
            }
        }
        let _ = placed;
    }
}

/// Generate a labeled benchmark graph.
///
/// Pipeline: draw degrees from the truncated power law whose mean is d_avg;
/// draw community sizes from a power law on a range derived from the intra
/// degree demand; assign nodes to communities largest-degree-first so every
/// node's intra demand fits its community; split each node's degree into
/// intra/inter stubs by randomized rounding of (1−mu)·d; pair stubs within
/// and across communities; keep the largest connected component (dropped
/// count goes in the metadata) and absorb any community the retention step
/// left with fewer than 2 nodes into its strongest neighbor.
pub fn generate(spec: &BenchmarkSpec) -> Result<(LabeledGraph, GenMeta), BenchError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let b = spec.d_max as f64;
    let a = solve_lower_cut(spec.tau1, spec.d_avg, b).ok_or(BenchError::InfeasibleSpec {
        tau1: spec.tau1,
        d_avg: spec.d_avg,
        d_max: spec.d_max,
    })?;
    let degrees: Vec<usize> = (0..n)
        .map(|_| (sample_power(spec.tau1, a, b, &mut rng).round() as usize).clamp(1, spec.d_max))
        .collect();

    // Community sizes: power law on a range wide enough for intra demand.
    let intra_frac = 1.0 - spec.mu;
    let s_lo = ((intra_frac * spec.d_avg).ceil() as usize + 1).max(3).min(n);
    let s_hi = ((intra_frac * b).ceil() as usize + 1).max(s_lo + 1).min(n);
    let mut sizes: Vec<usize> = Vec::new();
    let mut total = 0usize;
    while total < n {
        let s = (sample_power(spec.tau2, s_lo as f64, s_hi as f64, &mut rng).round() as usize)
            .clamp(s_lo, s_hi);
        if total + s >= n {
            let last = n - total;
            if last >= s_lo {
                sizes.push(last);
            } else {
                // Too small to stand alone: spread it over existing
                // communities round-robin (or grow the only one).
                if sizes.is_empty() {
                    sizes.push(last);
                } else {
                    for r in 0..last {
                        let idx = r % sizes.len();
                        sizes[idx] += 1;
                    }
                }
            }
            total = n;
        } else {
            sizes.push(s);
            total += s;
        }
    }
    // Make sure the biggest community can host the biggest intra demand,
    // stealing slots from the smallest communities if needed; otherwise
    // high-degree nodes would have part of their degree trimmed below.
    let max_demand = degrees
        .iter()
        .map(|&d| (intra_frac * d as f64).ceil() as usize)
        .max()
        .unwrap_or(0);
    let need = (max_demand + 1).min(n);
    if sizes.iter().copied().max().unwrap_or(0) < need {
        let big = (0..sizes.len())
            .max_by_key(|&c| (sizes[c], std::cmp::Reverse(c)))
            .unwrap();
        while sizes[big] < need {
            let donor = (0..sizes.len())
                .filter(|&c| c != big && sizes[c] > s_lo)
                .min_by_key(|&c| (sizes[c], c));
            match donor {
                Some(d) => {
                    sizes[d] -= 1;
                    sizes[big] += 1;
                }
                None => break,
            }
        }
    }
    let communities = sizes.len();

    // Assign nodes largest-degree-first, choosing uniformly among
    // communities that have room, can host the node's intra demand
    // (demand ≤ size − 1), and still have aggregate stub capacity
    // (a community of size s can absorb at most s·(s−1) intra stubs —
    // beyond that the wiring stage would be forced to drop edges).
    // Fall back to ignoring capacity, then to any community with room;
    // the leftover demand gets capped later. Random choice spreads
    // high-degree nodes out instead of saturating one community.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| degrees[y].cmp(&degrees[x]).then(x.cmp(&y)));
    let mut free: Vec<usize> = sizes.clone();
    let mut stub_load = vec![0usize; communities];
    let mut labels = vec![0usize; n];
    for &node in &order {
        let demand = (intra_frac * degrees[node] as f64).ceil() as usize;
        let fitting: Vec<usize> = (0..communities)
            .filter(|&c| {
                free[c] > 0
                    && sizes[c] - 1 >= demand
                    && stub_load[c] + demand <= sizes[c] * (sizes[c] - 1)
            })
            .collect();
        let pool: Vec<usize> = if fitting.is_empty() {
            let roomy: Vec<usize> = (0..communities)
                .filter(|&c| free[c] > 0 && sizes[c] - 1 >= demand)
                .collect();
            if roomy.is_empty() {
                (0..communities).filter(|&c| free[c] > 0).collect()
            } else {
                roomy
            }
        } else {
            fitting
        };
        let pick = pool[rng.gen_range(0..pool.len())];
        labels[node] = pick;
        free[pick] -= 1;
        stub_load[pick] += demand;
    }

    // Split each degree into intra and inter stubs by randomized rounding
    // of (1-mu)·d. Intra demand beyond what the community can host is
    // trimmed (the node's degree shrinks) rather than rerouted, so the
    // inter fraction stays at mu.
    let mut intra_stubs: Vec<Vec<usize>> = vec![Vec::new(); communities];
    let mut inter_stubs: Vec<usize> = Vec::new();
    for node in 0..n {
        let ideal = intra_frac * degrees[node] as f64;
        let mut t = ideal.floor() as usize;
        if rng.gen::<f64>() < ideal - ideal.floor() {
            t += 1;
        }
        let t = t.min(degrees[node]);
        let inter = degrees[node] - t;
        let t = t.min(sizes[labels[node]] - 1);
        for _ in 0..t {
            intra_stubs[labels[node]].push(node);
        }
        for _ in 0..inter {
            inter_stubs.push(node);
        }
    }

    // An odd intra-stub count can never pair fully; divert one stub to the
    // inter pool (when inter edges exist at all) instead of wasting it.
    for c in 0..communities {
        if intra_stubs[c].len() % 2 == 1 {
            let stub = intra_stubs[c].pop().unwrap();
            if spec.mu > 0.0 {
                inter_stubs.push(stub);
            }
        }
    }
    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    for c in 0..communities {
        let stubs = std::mem::take(&mut intra_stubs[c]);
        // Same-community check keeps edge swaps from crossing boundaries.
        pair_stubs(stubs, &mut edge_set, |u, v| labels[u] == labels[v], &mut rng);
    }
    let mut inter_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    pair_stubs(
        inter_stubs,
        &mut inter_set,
        |u, v| labels[u] != labels[v] && !edge_set.contains(&(u, v)),
        &mut rng,
    );

    // Per-edge weights: iterative proportional fitting drives each node's
    // weighted intra strength toward (1−mu)·deg^beta·intra_weight and its
    // weighted inter strength toward mu·deg^beta·inter_weight, so a node's
    // weighted mixing lands on mu even where the integer edge split could
    // not (a degree-2 node cannot have 10% of its edges outside, but it can
    // have 10% of its edge weight outside). Each pass rescales an edge by
    // the geometric mean of its endpoints' correction ratios; the pass
    // count is fixed so the output is bit-reproducible.
    let realized_deg = {
        let mut d = vec![0usize; n];
        for &(u, v) in edge_set.iter().chain(inter_set.iter()) {
            d[u] += 1;
            d[v] += 1;
        }
        d
    };
    let strength: Vec<f64> = realized_deg.iter().map(|&d| (d as f64).powf(spec.beta)).collect();
    let fit = |pairs: &BTreeSet<(usize, usize)>, target: &dyn Fn(usize) -> f64| -> Vec<(usize, usize, f64)> {
        let idx: Vec<(usize, usize)> = pairs.iter().copied().collect();
        let mut w: Vec<f64> = vec![1.0; idx.len()];
        for _ in 0..200 {
            let mut sum = vec![0.0f64; n];
            for (e, &(u, v)) in idx.iter().enumerate() {
                sum[u] += w[e];
                sum[v] += w[e];
            }
            let ratio: Vec<f64> =
                (0..n).map(|i| if sum[i] > 0.0 { target(i) / sum[i] } else { 1.0 }).collect();
            for (e, &(u, v)) in idx.iter().enumerate() {
                w[e] *= (ratio[u] * ratio[v]).sqrt();
            }
        }
        idx.into_iter().zip(w).map(|((u, v), wt)| (u, v, wt)).collect()
    };
    let intra_target = |i: usize| intra_frac * strength[i] * spec.intra_weight;
    let inter_target = |i: usize| spec.mu * strength[i] * spec.inter_weight;
    let mut edges = fit(&edge_set, &intra_target);
    edges.extend(fit(&inter_set, &inter_target));
    let graph = SimilarityMatrix::from_edges(n, &edges)?;
    let truth = Clustering::from_labels(&labels.iter().map(|&l| l as i64).collect::<Vec<_>>())?;

    // Largest-component retention.
    let comps = connected_components(&graph);
    let (graph, mut truth_labels, dropped) = if comps.k() == 1 {
        (graph, truth.labels().to_vec(), 0)
    } else {
        let comp_sizes = comps.sizes();
        let largest = (0..comps.k()).max_by_key(|&c| (comp_sizes[c], std::cmp::Reverse(c))).unwrap();
        let keep = comps.members(largest);
        let sub = induced_subgraph(&graph, &keep);
        let kept_labels: Vec<usize> = keep.iter().map(|&i| truth.labels()[i]).collect();
        let dropped = n - keep.len();
        (sub, kept_labels, dropped)
    };

    // Absorb communities the retention step shrank below 2 nodes.
    loop {
        // BTreeMap so the absorption order (ascending label) is the same in
        // every process; a hash map would randomize which tiny community
        // goes first and break bit-reproducibility.
        let counts = {
            let mut c = std::collections::BTreeMap::new();
            for &l in &truth_labels {
                *c.entry(l).or_insert(0usize) += 1;
            }
            c
        };
        let Some((&tiny, _)) = counts.iter().find(|&(_, &s)| s < 2) else {
            break;
        };
        if counts.len() == 1 {
            break;
        }
        let node = truth_labels.iter().position(|&l| l == tiny).unwrap();
        let w = graph.as_matrix();
        let target = (0..graph.n())
            .filter(|&j| truth_labels[j] != tiny)
            .max_by(|&x, &y| {
                w[(node, x)].partial_cmp(&w[(node, y)]).unwrap().then(y.cmp(&x))
            })
            .map(|j| truth_labels[j])
            .expect("at least two communities remain");
        truth_labels[node] = target;
    }
    let truth = Clustering::from_labels(&truth_labels.iter().map(|&l| l as i64).collect::<Vec<_>>())?;

    let labeled = LabeledGraph { graph, truth };
    let realized_d_avg =
        2.0 * labeled.graph.edges().len() as f64 / labeled.graph.n() as f64;
    let realized_mu = if labeled.graph.total_weight() > 0.0 {
        realized_mixing(&labeled)?
    } else {
        0.0
    };
    let meta = GenMeta {
        spec: spec.clone(),
        realized_d_avg,
        realized_mu,
        dropped_nodes: dropped,
        communities: labeled.truth.k(),
    };
    Ok((labeled, meta))
}

/// Weighted fraction of edge mass that crosses community boundaries, each
/// undirected edge counted once.
pub fn realized_mixing(g: &LabeledGraph) -> Result<f64, BenchError> {
    if g.truth.n() != g.graph.n() {
        return Err(BenchError::Graph(GraphError::LabelSizeMismatch {
            labels: g.truth.n(),
            n: g.graph.n(),
        }));
    }
    let mut inter = 0.0;
    let mut total = 0.0;
    for (u, v, w) in g.graph.edges() {
        total += w;
        if g.truth.labels()[u] != g.truth.labels()[v] {
            inter += w;
        }
    }
    if total == 0.0 {
        return Err(BenchError::EmptyGraph);
    }
    Ok(inter / total)
}

//! Seeded k-means on row-vector points: k-means++ initialization, Lloyd
//! iteration with empty-cluster reseeding, multiple restarts, best inertia
//! wins. Bit-identical for identical (input, seed).

use super::ClusterError;
use crate::partition::Clustering;
use crate::tolerances::{KMEANS_MAX_ITER, KMEANS_REL_TOL, KMEANS_RESTARTS};
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dist2(points: &DMatrix<f64>, i: usize, centroid: &[f64]) -> f64 {
    points
        .row(i)
        .iter()
        .zip(centroid)
        .map(|(&x, &c)| (x - c) * (x - c))
        .sum()
}

fn plus_plus_init(points: &DMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = points.nrows();
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    centroids.push(points.row(first).iter().copied().collect());
    let mut d2: Vec<f64> = (0..n).map(|i| dist2(points, i, &centroids[0])).collect();
    while centroids.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 && total.is_finite() {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            pick
        } else {
            // All remaining points coincide with a centroid; take the first
            // index not yet chosen so duplicates still get distinct seeds.
            (0..n).find(|&i| !chosen[i]).unwrap_or(0)
        };
        chosen[next] = true;
        let c: Vec<f64> = points.row(next).iter().copied().collect();
        for i in 0..n {
            d2[i] = d2[i].min(dist2(points, i, &c));
        }
        centroids.push(c);
    }
    centroids
}

/// One Lloyd run; returns (labels, inertia, inertia history per iteration).
fn lloyd(points: &DMatrix<f64>, k: usize, rng: &mut ChaCha8Rng) -> (Vec<usize>, f64, Vec<f64>) {
    let n = points.nrows();
    let d = points.ncols();
    let mut centroids = plus_plus_init(points, k, rng);
    let mut labels = vec![0usize; n];
    let mut prev_inertia = f64::INFINITY;
    let mut history = Vec::new();
    for _ in 0..KMEANS_MAX_ITER {
        // Assignment: nearest centroid, ties to the lowest index.
        for i in 0..n {
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            for (c, centroid) in centroids.iter().enumerate() {
                let dd = dist2(points, i, centroid);
                if dd < best_d {
                    best_d = dd;
                    best = c;
                }
            }
            labels[i] = best;
        }
        // Empty clusters: reseed each at the point currently farthest from
        // its assigned centroid (distinct points for distinct reseeds).
        let mut counts = vec![0usize; k];
        for &l in &labels {
            counts[l] += 1;
        }
        let mut taken = vec![false; n];
        for c in 0..k {
            if counts[c] > 0 {
                continue;
            }
            let far = (0..n)
                .filter(|&i| !taken[i] && counts[labels[i]] > 1)
                .max_by(|&a, &b| {
                    let da = dist2(points, a, &centroids[labels[a]]);
                    let db = dist2(points, b, &centroids[labels[b]]);
                    da.partial_cmp(&db).unwrap().then(b.cmp(&a))
                })
                .expect("k <= n guarantees a donor point");
            taken[far] = true;
            counts[labels[far]] -= 1;
            labels[far] = c;
            counts[c] = 1;
            centroids[c] = points.row(far).iter().copied().collect();
        }
        // Update step: centroids become cluster means.
        let mut sums = vec![vec![0.0; d]; k];
        for i in 0..n {
            for j in 0..d {
                sums[labels[i]][j] += points[(i, j)];
            }
        }
        for c in 0..k {
            for j in 0..d {
                centroids[c][j] = sums[c][j] / counts[c] as f64;
            }
        }
        let inertia: f64 = (0..n).map(|i| dist2(points, i, &centroids[labels[i]])).sum();
        history.push(inertia);
        if prev_inertia.is_finite() && prev_inertia - inertia <= KMEANS_REL_TOL * prev_inertia {
            prev_inertia = inertia;
            break;
        }
        prev_inertia = inertia;
    }
    (labels, prev_inertia, history)
}

pub(crate) fn kmeans_detailed(
    points: &DMatrix<f64>,
    k: usize,
    seed: u64,
) -> Result<(Clustering, f64, Vec<f64>), ClusterError> {
    let n = points.nrows();
    if k == 0 || k > n {
        return Err(ClusterError::BadK { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Vec<usize>, f64, Vec<f64>)> = None;
    for _ in 0..KMEANS_RESTARTS {
        let run = lloyd(points, k, &mut rng);
        if best.as_ref().map_or(true, |b| run.1 < b.1) {
            best = Some(run);
        }
    }
    let (labels, inertia, history) = best.expect("at least one restart ran");
    let raw: Vec<i64> = labels.iter().map(|&l| l as i64).collect();
    let clustering = Clustering::from_labels(&raw).expect("points are nonempty");
    Ok((clustering, inertia, history))
}

/// Cluster the rows of `points` into `k` groups by squared Euclidean
/// distance. Exactly `k` nonempty clusters come back (empty clusters are
/// reseeded during iteration); the best of several seeded restarts wins.
pub fn kmeans(points: &DMatrix<f64>, k: usize, seed: u64) -> Result<Clustering, ClusterError> {
    kmeans_detailed(points, k, seed).map(|(c, _, _)| c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::ars;
    use crate::partition::Clustering;

    fn points_1d(xs: &[f64]) -> DMatrix<f64> {
        DMatrix::from_column_slice(xs.len(), 1, xs)
    }

    #[test]
    fn separated_pairs_group_together() {
        let pts = DMatrix::from_row_slice(4, 2, &[0.0, 0.0, 0.1, 0.0, 10.0, 10.0, 10.1, 10.0]);
        let (c, inertia, _) = kmeans_detailed(&pts, 2, 7).unwrap();
        let truth = Clustering::from_labels(&[0, 0, 1, 1]).unwrap();
        assert_eq!(ars(&c, &truth).unwrap(), 1.0);
        // Each pair contributes 2 * (0.05)^2.
        assert!((inertia - 2.0 * 2.0 * 0.05 * 0.05).abs() < 1e-12);
    }

    #[test]
    fn k_equals_n_gives_singletons() {
        let pts = points_1d(&[0.0, 1.0, 5.0, 9.0]);
        let (c, inertia, _) = kmeans_detailed(&pts, 4, 0).unwrap();
        assert_eq!(c.k(), 4);
        assert_eq!(inertia, 0.0);
    }

    #[test]
    fn matches_brute_force_on_1d_quartet() {
        let xs = [0.0, 0.1, 10.0, 10.1];
        let pts = points_1d(&xs);
        let got = kmeans(&pts, 2, 42).unwrap();

        // Brute-force oracle: all 2-labelings with both labels used.
        let mut best_labels = None;
        let mut best_inertia = f64::INFINITY;
        for mask in 1u32..(1 << 4) - 1 {
            let labels: Vec<usize> = (0..4).map(|i| ((mask >> i) & 1) as usize).collect();
            let mut inertia = 0.0;
            for group in 0..2 {
                let members: Vec<f64> = (0..4).filter(|&i| labels[i] == group).map(|i| xs[i]).collect();
                if members.is_empty() {
                    continue;
                }
                let mean = members.iter().sum::<f64>() / members.len() as f64;
                inertia += members.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
            }
            if inertia < best_inertia {
                best_inertia = inertia;
                best_labels = Some(labels);
            }
        }
        let oracle = Clustering::from_labels(
            &best_labels.unwrap().iter().map(|&l| l as i64).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(ars(&got, &oracle).unwrap(), 1.0);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let pts = DMatrix::from_fn(30, 3, |i, j| ((i * 7 + j * 13) % 11) as f64 * 0.37);
        let a = kmeans(&pts, 4, 99).unwrap();
        let b = kmeans(&pts, 4, 99).unwrap();
        assert_eq!(a.labels(), b.labels());
    }

    #[test]
    fn inertia_never_increases_within_a_run() {
        let pts = DMatrix::from_fn(40, 2, |i, j| ((i * 31 + j * 17) % 23) as f64 * 0.21);
        let (_, _, history) = kmeans_detailed(&pts, 5, 3).unwrap();
        for w in history.windows(2) {
            assert!(w[1] <= w[0] + 1e-9, "inertia rose: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn exactly_k_clusters_even_with_duplicates() {
        // Three distinct locations, five points, k = 3: duplicates force the
        // degenerate-weight path in the initializer.
        let pts = points_1d(&[0.0, 0.0, 0.0, 5.0, 9.0]);
        let c = kmeans(&pts, 3, 1).unwrap();
        assert_eq!(c.k(), 3);
    }

    #[test]
    fn bad_k_is_rejected() {
        let pts = points_1d(&[0.0, 1.0]);
        assert_eq!(kmeans(&pts, 0, 0).unwrap_err(), ClusterError::BadK { k: 0, n: 2 });
        assert_eq!(kmeans(&pts, 3, 0).unwrap_err(), ClusterError::BadK { k: 3, n: 2 });
    }
}

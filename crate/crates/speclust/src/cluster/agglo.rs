//! Agglomerative clustering on point rows: repeated merging of the closest
//! pair of clusters under the chosen linkage until k remain.

use super::ClusterError;
use crate::partition::Clustering;
use nalgebra::DMatrix;

/// How the distance between two clusters is derived from member distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Linkage {
    /// Mean pairwise distance between members (the default).
    Average,
    /// Minimum pairwise distance.
    Single,
    /// Maximum pairwise distance.
    Complete,
}

impl Default for Linkage {
    fn default() -> Self {
        Linkage::Average
    }
}

/// Merge the closest pair of clusters (Euclidean distances, ties toward the
/// lexicographically smallest index pair) until `k` clusters remain.
pub fn agglomerative(points: &DMatrix<f64>, k: usize, linkage: Linkage) -> Result<Clustering, ClusterError> {
    let n = points.nrows();
    if k == 0 || k > n {
        return Err(ClusterError::BadK { k, n });
    }
    let mut dist = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (points.row(i) - points.row(j)).norm();
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }
    let mut active: Vec<bool> = vec![true; n];
    let mut sizes: Vec<usize> = vec![1; n];
    let mut labels: Vec<usize> = (0..n).collect();
    let mut remaining = n;
    while remaining > k {
        let mut best = (0usize, 0usize);
        let mut best_d = f64::INFINITY;
        for i in 0..n {
            if !active[i] {
                continue;
            }
            for j in (i + 1)..n {
                if active[j] && dist[i][j] < best_d {
                    best_d = dist[i][j];
                    best = (i, j);
                }
            }
        }
        let (a, b) = best;
        // Lance-Williams update of cluster-to-cluster distances.
        for h in 0..n {
            if !active[h] || h == a || h == b {
                continue;
            }
            let d = match linkage {
                Linkage::Average => {
                    (sizes[a] as f64 * dist[a][h] + sizes[b] as f64 * dist[b][h])
                        / (sizes[a] + sizes[b]) as f64
                }
                Linkage::Single => dist[a][h].min(dist[b][h]),
                Linkage::Complete => dist[a][h].max(dist[b][h]),
            };
            dist[a][h] = d;
            dist[h][a] = d;
        }
        sizes[a] += sizes[b];
        active[b] = false;
        for l in labels.iter_mut() {
            if *l == b {
                *l = a;
            }
        }
        remaining -= 1;
    }
    let raw: Vec<i64> = labels.iter().map(|&l| l as i64).collect();
    Ok(Clustering::from_labels(&raw).expect("points are nonempty"))
}

//! Spectral embedding + k-means: embed nodes by the k lowest nontrivial
//! eigenvectors of the normalized Laplacian, normalize rows to unit length,
//! and cluster the rows.

use super::kmeans::kmeans_detailed;
use super::ClusterError;
use crate::eigen::{smallest_eigenpairs_with, EigenOptions};
use crate::graph::{connected_components, laplacian, LaplacianKind, SimilarityMatrix};
use crate::partition::Clustering;
use crate::tolerances::ZERO_ROW_TOL;
use crate::Warning;

#[derive(Debug, Clone)]
pub struct SpectralOutcome {
    pub clustering: Clustering,
    pub warnings: Vec<Warning>,
}

/// Embed with the k smallest positive-eigenvalue eigenvectors of the
/// normalized Laplacian (for disconnected input the kernel itself is the
/// informative part, so the k lowest modes are used instead and a warning is
/// attached), row-normalize, then k-means with the given seed. A row that
/// has no mass in the chosen modes is an error, not a silent skip.
pub fn sp_kmeans(a: &SimilarityMatrix, k: usize, seed: u64) -> Result<SpectralOutcome, ClusterError> {
    sp_kmeans_with(a, k, seed, LaplacianKind::Normalized, &EigenOptions::default())
}

pub fn sp_kmeans_with(
    a: &SimilarityMatrix,
    k: usize,
    seed: u64,
    kind: LaplacianKind,
    opts: &EigenOptions,
) -> Result<SpectralOutcome, ClusterError> {
    let n = a.n();
    if k < 2 || k > n {
        return Err(ClusterError::BadK { k, n });
    }
    let mut warnings = Vec::new();
    let components = connected_components(a);
    if components.k() > 1 {
        warnings.push(Warning::Disconnected { components: components.k() });
    }
    let l = laplacian(a, kind)?;
    let pairs = smallest_eigenpairs_with(&l, k, components.k() == 1, opts)?;
    let mut rows = pairs.vectors().clone_owned();
    for i in 0..n {
        let norm = rows.row(i).norm();
        if norm < ZERO_ROW_TOL {
            return Err(ClusterError::ZeroRow { row: i, norm });
        }
        for j in 0..k {
            rows[(i, j)] /= norm;
        }
    }
    let (clustering, _, _) = kmeans_detailed(&rows, k, seed)?;
    Ok(SpectralOutcome { clustering, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;
    use crate::metrics::{ars, nmi};

    #[test]
    fn clique_ring_recovers_three_cliques() {
        let g = graphs::clique_ring(3, 4, 1.0, 1.0);
        let truth = graphs::clique_ring_truth(3, 4);
        let out = sp_kmeans(&g, 3, 0).unwrap();
        assert_eq!(nmi(&out.clustering, &truth).unwrap(), 1.0);
        assert_eq!(ars(&out.clustering, &truth).unwrap(), 1.0);
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn disjoint_cliques_recovered() {
        let g = graphs::disjoint_union(&[graphs::complete(4, 1.0), graphs::complete(4, 1.0)]);
        let truth = graphs::disjoint_union_truth(&[4, 4]);
        let out = sp_kmeans(&g, 2, 0).unwrap();
        assert_eq!(ars(&out.clustering, &truth).unwrap(), 1.0);
        assert_eq!(out.warnings, vec![Warning::Disconnected { components: 2 }]);
    }

    #[test]
    fn planted_blocks_recovered_across_seeds() {
        let sizes = [10usize, 10, 10, 10];
        let mut total = 0.0;
        for seed in 0..20u64 {
            let (g, truth) =
                graphs::planted_partition(&sizes, 0.9, 0.05, (1.0, 1.0), (1.0, 1.0), seed);
            let out = sp_kmeans(&g, 4, seed).unwrap();
            total += nmi(&out.clustering, &truth).unwrap();
        }
        assert_eq!(total / 20.0, 1.0);
    }

    #[test]
    fn rerun_same_seed_is_bit_identical() {
        let g = graphs::random_connected(20, 0.2, (0.5, 1.5), 11);
        let a = sp_kmeans(&g, 3, 5).unwrap();
        let b = sp_kmeans(&g, 3, 5).unwrap();
        assert_eq!(a.clustering.labels(), b.clustering.labels());
    }

    #[test]
    fn more_components_than_k_reports_zero_rows() {
        // Three components but k = 2: the two lowest kernel vectors carry no
        // mass on the third component, so its rows are zero.
        let g = graphs::disjoint_union(&[
            graphs::complete(3, 1.0),
            graphs::complete(3, 1.0),
            graphs::complete(3, 1.0),
        ]);
        let err = sp_kmeans(&g, 2, 0).unwrap_err();
        assert!(matches!(err, ClusterError::ZeroRow { .. }), "got {err:?}");
    }

    #[test]
    fn k_bounds_checked() {
        let g = graphs::complete(4, 1.0);
        assert_eq!(sp_kmeans(&g, 1, 0).unwrap_err(), ClusterError::BadK { k: 1, n: 4 });
        assert_eq!(sp_kmeans(&g, 5, 0).unwrap_err(), ClusterError::BadK { k: 5, n: 4 });
    }
}

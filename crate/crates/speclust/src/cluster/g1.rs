//! Two-way spectral split: threshold the eigenvector of the smallest
//! positive eigenvalue of the normalized Laplacian.

use super::ClusterError;
use crate::eigen::{smallest_eigenpairs_with, EigenOptions};
use crate::graph::{connected_components, laplacian, LaplacianKind, SimilarityMatrix};
use crate::partition::Clustering;
use crate::Warning;

/// How the split threshold `r` is chosen from the eigenvector entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdRule {
    /// Arithmetic mean of the entries (the default).
    Mean,
    /// Median of the entries (midpoint of the two central values for even n).
    Median,
    /// A caller-supplied constant.
    Fixed(f64),
}

impl Default for ThresholdRule {
    fn default() -> Self {
        ThresholdRule::Mean
    }
}

#[derive(Debug, Clone)]
pub struct G1Outcome {
    pub clustering: Clustering,
    /// The threshold actually used.
    pub threshold: f64,
    pub warnings: Vec<Warning>,
}

/// Bipartition: node i joins cluster 0 when `v_i < r`, cluster 1 otherwise,
/// where v is the eigenvector of the smallest positive eigenvalue of the
/// normalized Laplacian. Fails with [`ClusterError::DegenerateSplit`] when
/// every node lands on one side.
pub fn sp_g1(a: &SimilarityMatrix, rule: ThresholdRule) -> Result<G1Outcome, ClusterError> {
    sp_g1_with(a, rule, LaplacianKind::Normalized, &EigenOptions::default())
}

pub fn sp_g1_with(
    a: &SimilarityMatrix,
    rule: ThresholdRule,
    kind: LaplacianKind,
    opts: &EigenOptions,
) -> Result<G1Outcome, ClusterError> {
    let n = a.n();
    let mut warnings = Vec::new();
    let components = connected_components(a);
    if components.k() > 1 {
        warnings.push(Warning::Disconnected { components: components.k() });
    }
    let l = laplacian(a, kind)?;
    let pairs = smallest_eigenpairs_with(&l, 1, true, opts)?;
    let v: Vec<f64> = pairs.vectors().column(0).iter().copied().collect();
    let threshold = match rule {
        ThresholdRule::Mean => v.iter().sum::<f64>() / n as f64,
        ThresholdRule::Median => {
            let mut sorted = v.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if n % 2 == 1 {
                sorted[n / 2]
            } else {
                0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
            }
        }
        ThresholdRule::Fixed(r) => r,
    };
    let labels: Vec<usize> = v.iter().map(|&x| if x < threshold { 0 } else { 1 }).collect();
    let low = labels.iter().filter(|&&l| l == 0).count();
    if low == 0 || low == n {
        return Err(ClusterError::DegenerateSplit { threshold, n });
    }
    let clustering = Clustering::try_new(labels).expect("both sides are nonempty");
    Ok(G1Outcome { clustering, threshold, warnings })
}

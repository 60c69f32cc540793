//! Spectral clustering by maximum-gap cuts over multiple eigenvector modes.
//!
//! Each of the m lowest nontrivial Laplacian eigenvectors is sorted and cut
//! at its largest consecutive gap, yielding a bipartition per mode; the
//! common refinement of all m bipartitions (nonempty intersections of
//! below-cut/above-cut memberships) is the clustering.

use super::ClusterError;
use crate::eigen::{smallest_eigenpairs_with, EigenOptions};
use crate::graph::{connected_components, laplacian, LaplacianKind, SimilarityMatrix};
use crate::partition::Clustering;
use crate::tolerances::GAP_TIE_TOL;
use crate::Warning;
use std::collections::HashMap;

/// Where one eigenvector mode was cut: the sorted entries, the index of the
/// largest consecutive gap (ties resolved toward the smallest index within
/// [`GAP_TIE_TOL`]), and the entry value at the cut. Nodes whose entry is
/// `<= cut_value` fall on the low side of this mode's bipartition.
#[derive(Debug, Clone, PartialEq)]
pub struct GapCut {
    pub mode_index: usize,
    pub sorted_entries: Vec<f64>,
    pub cut_index: usize,
    pub cut_value: f64,
    pub gap_size: f64,
}

/// Sort `entries` ascending and locate the largest consecutive gap.
/// Requires at least two entries.
pub fn gap_cut(mode_index: usize, entries: &[f64]) -> GapCut {
    assert!(entries.len() >= 2, "a cut needs at least two entries");
    let mut sorted = entries.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut max_gap = f64::NEG_INFINITY;
    for i in 0..sorted.len() - 1 {
        max_gap = max_gap.max(sorted[i + 1] - sorted[i]);
    }
    let cut_index = (0..sorted.len() - 1)
        .find(|&i| sorted[i + 1] - sorted[i] >= max_gap - GAP_TIE_TOL)
        .expect("at least one consecutive gap exists");
    GapCut {
        mode_index,
        cut_index,
        cut_value: sorted[cut_index],
        gap_size: sorted[cut_index + 1] - sorted[cut_index],
        sorted_entries: sorted,
    }
}

#[derive(Debug, Clone)]
pub struct MgmOutcome {
    pub clustering: Clustering,
    /// One cut per mode, in mode order.
    pub cuts: Vec<GapCut>,
    pub warnings: Vec<Warning>,
}

/// Multi-gap-mode spectral clustering on `m` eigenvector modes.
///
/// The decomposition always discards exactly the lowest mode (the trivial
/// constant vector on connected input) and cuts the next `m`. Disconnected
/// input is accepted with a [`Warning::Disconnected`]: the modes that enter
/// the cuts then include the remaining kernel vectors, which are constant on
/// components, so cuts fall between components first.
///
/// The cluster count lands in `[1, min(2^m, n)]` and is at least 2 whenever
/// some mode's entries are non-constant, which holds for every connected
/// input.
pub fn sp_mgm(a: &SimilarityMatrix, m: usize, kind: LaplacianKind) -> Result<MgmOutcome, ClusterError> {
    sp_mgm_with(a, m, kind, &EigenOptions::default())
}

pub fn sp_mgm_with(
    a: &SimilarityMatrix,
    m: usize,
    kind: LaplacianKind,
    opts: &EigenOptions,
) -> Result<MgmOutcome, ClusterError> {
    let n = a.n();
    if m < 1 || m + 2 > n {
        return Err(ClusterError::TooManyModes { m, n });
    }
    let mut warnings = Vec::new();
    let components = connected_components(a);
    if components.k() > 1 {
        warnings.push(Warning::Disconnected { components: components.k() });
    }
    let l = laplacian(a, kind)?;
    let pairs = smallest_eigenpairs_with(&l, m + 1, false, opts)?;

    let mut cuts = Vec::with_capacity(m);
    let mut signatures = vec![Vec::with_capacity(m); n];
    for j in 0..m {
        let entries: Vec<f64> = pairs.vectors().column(j + 1).iter().copied().collect();
        let cut = gap_cut(j, &entries);
        for (i, sig) in signatures.iter_mut().enumerate() {
            sig.push(entries[i] <= cut.cut_value);
        }
        cuts.push(cut);
    }

    let mut ids: HashMap<&[bool], usize> = HashMap::new();
    let mut labels = Vec::with_capacity(n);
    for sig in &signatures {
        let next = ids.len();
        labels.push(*ids.entry(sig.as_slice()).or_insert(next));
    }
    let clustering = Clustering::try_new(labels).expect("first-occurrence ids are consecutive");
    Ok(MgmOutcome { clustering, cuts, warnings })
}

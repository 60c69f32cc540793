//! Spectral graph clustering built around Laplacian eigenvector gaps.
//!
//! The centerpiece is [`cluster::sp_mgm`], the spectral maximum-gap method:
//! sort each of the `m` lowest nontrivial Laplacian eigenvectors, cut each at
//! its largest consecutive gap, and intersect the resulting bipartitions into
//! a final clustering. Around it the crate provides
//!
//! - [`graph`]: dense symmetric similarity matrices, degrees, unnormalized and
//!   normalized Laplacians, connectivity, and cluster-wise edge splits;
//! - [`eigen`]: the deterministic symmetric eigendecomposition contract
//!   (ascending eigenvalues, orthonormal vectors, kernel bookkeeping);
//! - [`cluster`]: SP-MGM plus the comparison algorithms — Fiedler-threshold
//!   bipartition (`sp_g1`), spectral embedding + k-means (`sp_kmeans`), plain
//!   k-means, and agglomerative clustering;
//! - [`metrics`]: normalized mutual information and adjusted Rand score;
//! - [`benchgen`]: an LFR-style weighted benchmark-graph generator and readers
//!   and writers for `network.dat`/`community.dat` files;
//! - [`theory`]: first-order eigenpair perturbation and the cluster-recovery
//!   bound checker;
//! - [`similarity`]: Gaussian and precision-weighted similarity builders;
//! - [`harness`]: seeded benchmark sweeps with aggregated scores;
//! - [`io`]: the dense-matrix CSV, edge TSV, labels, and feature CSV formats.
//!
//! All matrix work is dense `f64` on [`nalgebra`] types; the intended scale is
//! up to a few thousand nodes. Every operation is a pure function of its
//! inputs (and an explicit seed where randomness is involved), so results are
//! reproducible bit for bit.

pub mod benchgen;
pub mod cluster;
pub mod eigen;
pub mod graph;
pub mod graphs;
pub mod harness;
pub mod io;
pub mod metrics;
pub mod partition;
pub mod similarity;
pub mod theory;
pub mod tolerances;

pub use partition::Clustering;

use std::fmt;

/// Non-fatal condition surfaced by an operation alongside its result.
#[derive(Debug, Clone, PartialEq)]
pub enum Warning {
    /// The input graph is disconnected; spectral algorithms proceed on the
    /// modes above the first trivial one, which for a disconnected graph are
    /// kernel (component-indicator) eigenvectors.
    Disconnected { components: usize },
    /// A similarity builder produced entries above 1, which usually signals
    /// anti-correlated inputs to the precision kernel.
    SimilarityAboveOne { count: usize, max: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::Disconnected { components } => {
                write!(f, "graph is disconnected ({components} components); using kernel modes above the first")
            }
            Warning::SimilarityAboveOne { count, max } => {
                write!(f, "{count} similarity entries exceed 1 (max {max}); inputs may be anti-correlated")
            }
        }
    }
}

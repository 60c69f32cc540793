//! Clustering algorithms: the gap-cut spectral method, two spectral
//! baselines, and two non-spectral baselines.
//!
//! All algorithms are pure functions of (input, seed) with no global state;
//! rerunning with identical inputs is bit-identical.

mod agglo;
mod g1;
mod kmeans;
mod mgm;
mod skmeans;

pub use agglo::{agglomerative, Linkage};
pub use g1::{sp_g1, sp_g1_with, G1Outcome, ThresholdRule};
pub use kmeans::kmeans;
pub use mgm::{gap_cut, sp_mgm, sp_mgm_with, GapCut, MgmOutcome};
pub use skmeans::{sp_kmeans, sp_kmeans_with, SpectralOutcome};

use crate::eigen::EigenError;
use crate::graph::GraphError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ClusterError {
    #[error("mode count {m} out of range: need 1 <= m <= n-2 with n = {n}")]
    TooManyModes { m: usize, n: usize },
    #[error("threshold {threshold} puts all {n} nodes on one side")]
    DegenerateSplit { threshold: f64, n: usize },
    #[error("spectral embedding row {row} has norm {norm:.3e}, below the zero-row tolerance")]
    ZeroRow { row: usize, norm: f64 },
    #[error("cluster count {k} out of range for {n} points")]
    BadK { k: usize, n: usize },
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

//! Central numeric tolerances and iteration budgets.
//!
//! Every cutoff that decides behavior (kernel classification, degenerate-gap
//! ties, convergence) lives here with its rationale, so tests and callers pin
//! the same values.

/// Kernel classification: an eigenvalue λ of a Laplacian counts as zero when
/// λ < `ZERO_TOL_FACTOR · max(1, spectral_radius)`. Scale-invariant, so a
/// uniformly reweighted graph keeps the same kernel dimension.
pub const ZERO_TOL_FACTOR: f64 = 1e-9;

/// Pairwise orthonormality guarantee on returned eigenvectors:
/// `|vᵢᵀvⱼ − δᵢⱼ| ≤ ORTHO_TOL`.
pub const ORTHO_TOL: f64 = 1e-8;

/// Eigenpair residual guarantee: `‖Lv − λv‖₂ ≤ RESIDUAL_TOL · max(1, ρ)`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Two consecutive gaps in a sorted eigenvector tie when they differ by at
/// most this; ties resolve to the smallest cut index for determinism.
pub const GAP_TIE_TOL: f64 = 1e-12;

/// Rows of a spectral embedding with norm below this cannot be normalized and
/// are reported as an error rather than silently skipped.
pub const ZERO_ROW_TOL: f64 = 1e-12;

/// Symmetry slack accepted when ingesting a dense matrix from the outside
/// world, relative to the largest absolute entry; the stored matrix is then
/// symmetrized exactly by averaging.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// k-means restarts per call; the best inertia wins.
pub const KMEANS_RESTARTS: usize = 10;

/// k-means iteration cap per restart.
pub const KMEANS_MAX_ITER: usize = 300;

/// k-means convergence: stop when inertia improves by less than this relative
/// amount between iterations.
pub const KMEANS_REL_TOL: f64 = 1e-6;

/// Iteration budget handed to the symmetric QL eigensolver before reporting
/// failure to converge. Generous: well-formed symmetric problems converge in
/// a small multiple of n.
pub const EIGEN_MAX_ITER: usize = 100_000;

/// Default kernel width for the precision similarity builder.
pub const SIGMA_DEFAULT: f64 = 1e-2;

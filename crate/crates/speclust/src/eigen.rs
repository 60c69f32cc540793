//! Symmetric eigendecomposition contract: full spectra and smallest-k
//! eigenpairs of Laplacians, ascending, with orthonormal vectors, kernel
//! bookkeeping, and deterministic output for identical input bits.
//!
//! The decomposition itself is dense Householder tridiagonalization followed
//! by implicit symmetric QL iteration (no randomized initialization), which
//! deflates exactly on block boundaries; what this module owns is the
//! ordering, the kernel classification rule, and the accuracy guarantees
//! spelled out on [`EigenPairs`].

use crate::graph::Laplacian;
use crate::tolerances::{EIGEN_MAX_ITER, ZERO_TOL_FACTOR};
use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EigenError {
    #[error("eigensolver failed to converge within {0} iterations")]
    NotConverged(usize),
    #[error("requested {requested} eigenpairs but only {available} are available")]
    TooFewEigenvalues { requested: usize, available: usize },
    #[error("k must be at least 1")]
    KMustBePositive,
}

/// Tunables for eigen-dependent operations.
#[derive(Debug, Clone, Copy)]
pub struct EigenOptions {
    /// An eigenvalue λ counts as zero (kernel) when
    /// λ < `zero_tol_factor · max(1, spectral_radius)`.
    pub zero_tol_factor: f64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { zero_tol_factor: ZERO_TOL_FACTOR }
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// (columns) and the number of eigenvalues classified as zero.
///
/// Guarantees, tested as the module's contract:
/// - `values` ascending;
/// - `|vᵢᵀvⱼ − δᵢⱼ| ≤ 1e-8` for all returned pairs;
/// - `‖Lv − λv‖₂ ≤ 1e-8 · max(1, spectral_radius)` for each pair.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    values: Vec<f64>,
    vectors: DMatrix<f64>,
    kernel_dim: usize,
}

impl EigenPairs {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Eigenvectors as columns, aligned with `values`.
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// How many eigenvalues of the decomposed matrix lie below the kernel
    /// tolerance. For a skip-kernel query this is exactly the number skipped.
    pub fn kernel_dim(&self) -> usize {
        self.kernel_dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Full ascending spectrum of an arbitrary symmetric matrix: the shared
/// backend for Laplacian queries and for perturbation-theory code that works
/// on general symmetric matrices. The input is symmetrized by averaging
/// before decomposition to absorb rounding drift.
pub fn symmetric_spectrum(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>), EigenError> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "matrix must be square");
    let mut sym = m.clone();
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (sym[(i, j)] + sym[(j, i)]);
            sym[(i, j)] = avg;
            sym[(j, i)] = avg;
        }
    }
    let decomp = SymmetricEigen::try_new(sym, f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or(EigenError::NotConverged(EIGEN_MAX_ITER))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| decomp.eigenvalues[a].partial_cmp(&decomp.eigenvalues[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &decomp.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

fn kernel_count(values: &[f64], zero_tol_factor: f64) -> usize {
    let rho = values.last().copied().unwrap_or(0.0);
    let zero_tol = zero_tol_factor * rho.max(1.0);
    values.iter().take_while(|&&v| v < zero_tol).count()
}

/// All n eigenpairs of the Laplacian.
pub fn full_spectrum(l: &Laplacian) -> Result<EigenPairs, EigenError> {
    full_spectrum_with(l, &EigenOptions::default())
}

pub fn full_spectrum_with(l: &Laplacian, opts: &EigenOptions) -> Result<EigenPairs, EigenError> {
    let (values, vectors) = symmetric_spectrum(l.as_matrix())?;
    let kernel_dim = kernel_count(&values, opts.zero_tol_factor);
    Ok(EigenPairs { values, vectors, kernel_dim })
}

/// The k smallest eigenpairs, either from the bottom of the spectrum
/// (`skip_kernel = false`) or starting at the smallest eigenvalue classified
/// as positive (`skip_kernel = true`).
pub fn smallest_eigenpairs(l: &Laplacian, k: usize, skip_kernel: bool) -> Result<EigenPairs, EigenError> {
    smallest_eigenpairs_with(l, k, skip_kernel, &EigenOptions::default())
}

pub fn smallest_eigenpairs_with(
    l: &Laplacian,
    k: usize,
    skip_kernel: bool,
    opts: &EigenOptions,
) -> Result<EigenPairs, EigenError> {
    if k == 0 {
        return Err(EigenError::KMustBePositive);
    }
    let full = full_spectrum_with(l, opts)?;
    let start = if skip_kernel { full.kernel_dim } else { 0 };
    let available = full.values.len() - start;
    if k > available {
        return Err(EigenError::TooFewEigenvalues { requested: k, available });
    }
    Ok(EigenPairs {
        values: full.values[start..start + k].to_vec(),
        vectors: full.vectors.columns(start, k).clone_owned(),
        kernel_dim: full.kernel_dim,
    })
}

/// Largest eigenvalue. Laplacians are positive semidefinite, so this is the
/// spectral radius.
pub fn spectral_radius(l: &Laplacian) -> Result<f64, EigenError> {
    let (values, _) = symmetric_spectrum(l.as_matrix())?;
    Ok(*values.last().expect("Laplacians are at least 1x1"))
}

//! Similarity-matrix builders over feature vectors: a Gaussian
//! distance kernel, a precision-weighted inner-product kernel, and a
//! precision-weighted squared-distance alternative.

use crate::graph::SimilarityMatrix;
use crate::tolerances::SIGMA_DEFAULT;
use crate::Warning;
use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SimilarityError {
    #[error("sigma must be positive, got {0}")]
    NonPositiveSigma(f64),
    #[error("this kernel needs per-feature variances, but none were supplied")]
    MissingVariances,
    #[error("feature entry ({row},{col}) = {value} is not finite")]
    NotFinite { row: usize, col: usize, value: f64 },
    #[error("variance {index} = {value}; variances must be positive and finite")]
    BadVariance { index: usize, value: f64 },
    #[error("variance vector has {got} entries for {want} features")]
    VarianceLengthMismatch { got: usize, want: usize },
    #[error("feature matrix must have at least one sample and one feature")]
    Empty,
}

/// n samples by d features, optionally with a per-feature variance vector
/// (a diagonal covariance).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    data: DMatrix<f64>,
    variances: Option<Vec<f64>>,
}

impl FeatureMatrix {
    pub fn new(data: DMatrix<f64>) -> Result<Self, SimilarityError> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(SimilarityError::Empty);
        }
        for i in 0..data.nrows() {
            for j in 0..data.ncols() {
                if !data[(i, j)].is_finite() {
                    return Err(SimilarityError::NotFinite { row: i, col: j, value: data[(i, j)] });
                }
            }
        }
        Ok(FeatureMatrix { data, variances: None })
    }

    pub fn with_variances(data: DMatrix<f64>, variances: Vec<f64>) -> Result<Self, SimilarityError> {
        let base = Self::new(data)?;
        if variances.len() != base.data.ncols() {
            return Err(SimilarityError::VarianceLengthMismatch {
                got: variances.len(),
                want: base.data.ncols(),
            });
        }
        if let Some(index) = variances.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(SimilarityError::BadVariance { index, value: variances[index] });
        }
        Ok(FeatureMatrix { variances: Some(variances), ..base })
    }

    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    pub fn d(&self) -> usize {
        self.data.ncols()
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn variances(&self) -> Option<&[f64]> {
        self.variances.as_deref()
    }
}

/// The conventional choice of kernel width when the caller does not supply
/// one.
pub const fn default_sigma() -> f64 {
    SIGMA_DEFAULT
}

fn check_sigma(sigma: f64) -> Result<(), SimilarityError> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(SimilarityError::NonPositiveSigma(sigma))
    }
}

fn build(
    n: usize,
    mut entry: impl FnMut(usize, usize) -> f64,
) -> (SimilarityMatrix, Vec<Warning>) {
    let mut w = DMatrix::<f64>::zeros(n, n);
    let mut above_one = 0usize;
    let mut max_entry = f64::NEG_INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = entry(i, j);
            w[(i, j)] = a;
            w[(j, i)] = a;
            if a > 1.0 {
                above_one += 1;
            }
            max_entry = max_entry.max(a);
        }
    }
    let sim = SimilarityMatrix::from_dense(w).expect("kernel output is symmetric and nonnegative");
    let warnings = if above_one > 0 {
        vec![Warning::SimilarityAboveOne { count: above_one, max: max_entry }]
    } else {
        Vec::new()
    };
    (sim, warnings)
}

/// Gaussian kernel on Euclidean distance: A_ij = exp(−d_ij² / (2σ)).
/// Off-diagonal entries lie in (0, 1] and decrease with distance.
pub fn gaussian_similarity(f: &FeatureMatrix, sigma: f64) -> Result<SimilarityMatrix, SimilarityError> {
    check_sigma(sigma)?;
    let data = f.data();
    let (sim, _) = build(f.n(), |i, j| {
        let d2 = (data.row(i) - data.row(j)).norm_squared();
        (-d2 / (2.0 * sigma)).exp()
    });
    Ok(sim)
}

/// Precision-weighted inner-product kernel: d_ij = Σ_f fᵢ[f]·fⱼ[f]/var[f],
/// A_ij = exp(−d_ij/σ).
///
/// Because d_ij is an inner product rather than a distance, anti-correlated
/// samples produce d_ij < 0 and hence similarities above 1; such entries are
/// counted in a [`Warning::SimilarityAboveOne`] rather than clipped, since
/// clipping would silently change the kernel.
pub fn precision_similarity(
    f: &FeatureMatrix,
    sigma: f64,
) -> Result<(SimilarityMatrix, Vec<Warning>), SimilarityError> {
    check_sigma(sigma)?;
    let variances = f.variances().ok_or(SimilarityError::MissingVariances)?;
    let data = f.data();
    Ok(build(f.n(), |i, j| {
        let d: f64 = (0..f.d()).map(|c| data[(i, c)] * data[(j, c)] / variances[c]).sum();
        (-d / sigma).exp()
    }))
}

/// Precision-weighted squared-distance kernel:
/// d_ij = Σ_f (fᵢ[f]−fⱼ[f])²/var[f], A_ij = exp(−d_ij/σ). A proper
/// distance-based alternative to [`precision_similarity`] with entries
/// in (0, 1].
pub fn mahalanobis_sq_similarity(
    f: &FeatureMatrix,
    sigma: f64,
) -> Result<SimilarityMatrix, SimilarityError> {
    check_sigma(sigma)?;
    let variances = f.variances().ok_or(SimilarityError::MissingVariances)?;
    let data = f.data();
    let (sim, _) = build(f.n(), |i, j| {
        let d: f64 = (0..f.d())
            .map(|c| {
                let diff = data[(i, c)] - data[(j, c)];
                diff * diff / variances[c]
            })
            .sum();
        (-d / sigma).exp()
    });
    Ok(sim)
}

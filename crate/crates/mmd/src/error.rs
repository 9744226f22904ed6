use thiserror::Error;

use crate::kernel::KernelFamily;

/// Errors surfaced by kernel evaluation and both estimation paths.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MmdError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("non-finite value in input data")]
    NonFiniteInput,

    #[error("sample is empty")]
    EmptySample,

    #[error("bandwidth must be positive and finite (got {sigma})")]
    InvalidBandwidth { sigma: f64 },

    #[error("all pairwise distances are zero; bandwidth is undefined")]
    DegenerateSample,

    #[error("{family:?} kernel has no bandwidth-power identity")]
    UnsupportedFamily { family: KernelFamily },

    #[error("power exponent must be >= 1")]
    InvalidExponent,

    #[error("need at least {needed} observations per sample for the MMD mean (got n={n}, m={m})")]
    InsufficientSample { needed: usize, n: usize, m: usize },

    #[error(
        "need at least {needed} observations per sample for the variance estimator (got n={n}, m={m})"
    )]
    InsufficientSampleForVariance { needed: usize, n: usize, m: usize },

    #[error("fast path requires univariate data (got d={dim})")]
    NotUnivariate { dim: usize },

    #[error("input is not sorted; a sortedness certificate is required")]
    UnsortedInput,
}

impl MmdError {
    /// Stable machine-readable identifier, used by CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            MmdError::DimensionMismatch { .. } => "dimension-mismatch",
            MmdError::NonFiniteInput => "non-finite-input",
            MmdError::EmptySample => "empty-sample",
            MmdError::InvalidBandwidth { .. } => "invalid-bandwidth",
            MmdError::DegenerateSample => "degenerate-sample",
            MmdError::UnsupportedFamily { .. } => "unsupported-family",
            MmdError::InvalidExponent => "invalid-exponent",
            MmdError::InsufficientSample { .. } => "insufficient-sample",
            MmdError::InsufficientSampleForVariance { .. } => {
                "insufficient-sample-for-variance"
            }
            MmdError::NotUnivariate { .. } => "not-univariate",
            MmdError::UnsortedInput => "unsorted-input",
        }
    }
}

pub type Result<T> = std::result::Result<T, MmdError>;

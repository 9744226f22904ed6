//! Unbiased MMD^2 two-sample statistic with an exactly unbiased
//! finite-sample variance estimator.
//!
//! Two computation routes produce the same [`MmdReport`]:
//!
//! * [`exact`] — the quadratic kernel-matrix reference path. Any kernel
//!   family, any dimension, any `n != m`. Compensated summation in a fixed
//!   order makes it the numerical ground truth.
//! * [`fast`] — sorted prefix/suffix accumulators for the univariate
//!   Laplacian kernel, exact in O(n log n + m log m).
//!
//! The variance decomposes into a first-order term (sample variances of
//! the empirical projections) and a second-order term (unbiased moments of
//! the pairwise interaction residuals assembled from kernel-matrix
//! functionals with falling-factorial denominators); `var_total` is their
//! sum and matches the empirical variance of `mmd2` in expectation at any
//! finite `n`, `m`.
//!
//! ```
//! use mmd::{KernelSpec, Sample};
//!
//! let x = Sample::univariate(vec![0.1, 0.4, -0.3, 1.2, 0.8]).unwrap();
//! let y = Sample::univariate(vec![1.1, 2.4, 0.9, 1.7]).unwrap();
//!
//! let spec = KernelSpec::laplacian(1.0f64).unwrap();
//! let matrix = mmd::exact::variance_full(&x, &y, &spec).unwrap();
//! let fast = mmd::fast::variance_fast(&x, &y, spec.sigma()).unwrap();
//!
//! assert!((matrix.mmd2 - fast.mmd2).abs() < 1e-12);
//! assert!((matrix.var_total - fast.var_total).abs() < 1e-12);
//! ```
//!
//! Everything numeric is generic over the scalar (f32 or f64) through the
//! [`Real`] trait; the `*64`/`*32` aliases below pin common choices.

pub mod error;
pub mod exact;
pub mod fast;
mod float;
pub mod kernel;
mod report;
mod sample;
pub mod sum;

pub use error::{MmdError, Result};
pub use float::Real;
pub use kernel::{kernel_eval, median_heuristic, power_bandwidth, KernelFamily, KernelSpec};
pub use report::{EstimatePath, MmdReport};
pub use sample::Sample;

pub type Sample64 = Sample<f64>;
pub type Sample32 = Sample<f32>;
pub type KernelSpec64 = KernelSpec<f64>;
pub type KernelSpec32 = KernelSpec<f32>;
pub type MmdReport64 = MmdReport<f64>;
pub type MmdReport32 = MmdReport<f32>;

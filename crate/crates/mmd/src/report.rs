use crate::float::Real;
use crate::kernel::KernelSpec;

/// Which computation route produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatePath {
    /// Quadratic kernel-matrix reference path (any kernel, any dimension).
    Matrix,
    /// Sorted prefix/suffix accumulator path (univariate Laplacian only).
    FastLaplace,
}

impl EstimatePath {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatePath::Matrix => "matrix",
            EstimatePath::FastLaplace => "fast",
        }
    }
}

/// Unbiased MMD^2 together with its finite-sample variance decomposition.
///
/// `var_total` is always `var_t1 + var_t2` exactly as computed. `var_t2`
/// (and hence the total) may be slightly negative in tiny samples: the
/// second-order moment estimators are unbiased, not sign-constrained. The
/// raw values are reported; see [`MmdReport::clamped_nonnegative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmdReport<F> {
    pub mmd2: F,
    pub var_t1: F,
    pub var_t2: F,
    pub var_total: F,
    pub n: usize,
    pub m: usize,
    pub spec: KernelSpec<F>,
    pub path: EstimatePath,
}

impl<F: Real> MmdReport<F> {
    pub(crate) fn assemble(
        mmd2: F,
        var_t1: F,
        var_t2: F,
        n: usize,
        m: usize,
        spec: KernelSpec<F>,
        path: EstimatePath,
    ) -> Self {
        Self {
            mmd2,
            var_t1,
            var_t2,
            var_total: var_t1 + var_t2,
            n,
            m,
            spec,
            path,
        }
    }

    /// Copy with the second-order term clamped so `var_total >= 0`, for
    /// consumers that need a usable variance rather than an unbiased one.
    /// Clamping preserves `var_total = var_t1 + var_t2`.
    pub fn clamped_nonnegative(&self) -> Self {
        let mut out = *self;
        if out.var_total < F::zero() {
            out.var_t2 = -out.var_t1;
            out.var_total = F::zero();
        }
        out
    }
}

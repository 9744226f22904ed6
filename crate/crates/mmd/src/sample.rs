use crate::error::{MmdError, Result};
use crate::float::Real;

/// An ordered batch of observations from one distribution.
///
/// Stored row-major: `n` observations of dimension `d`. The `sorted`
/// certificate is only meaningful for univariate samples and asserts the
/// values are non-decreasing; the fast path requires it, the matrix path
/// ignores it. Non-finite values are rejected at construction so the
/// numeric kernels never have to re-check.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<F> {
    data: Vec<F>,
    n: usize,
    dim: usize,
    sorted: bool,
}

impl<F: Real> Sample<F> {
    /// Build a sample from row vectors. All rows must share one dimension.
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(MmdError::EmptySample);
        }
        let dim = rows[0].len();
        if dim == 0 {
            return Err(MmdError::EmptySample);
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            if row.len() != dim {
                return Err(MmdError::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(data, dim)
    }

    /// Build from a flat row-major buffer of `len / dim` observations.
    pub fn from_flat(data: Vec<F>, dim: usize) -> Result<Self> {
        if dim == 0 || data.is_empty() || data.len() % dim != 0 {
            return Err(MmdError::EmptySample);
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(MmdError::NonFiniteInput);
        }
        let n = data.len() / dim;
        let sorted = dim == 1 && data.windows(2).all(|w| w[0] <= w[1]);
        Ok(Self {
            data,
            n,
            dim,
            sorted,
        })
    }

    /// Univariate sample; records the sortedness certificate if it holds.
    pub fn univariate(values: Vec<F>) -> Result<Self> {
        Self::from_flat(values, 1)
    }

    /// Univariate sample that must already be non-decreasing.
    pub fn sorted_univariate(values: Vec<F>) -> Result<Self> {
        let s = Self::from_flat(values, 1)?;
        if !s.sorted {
            return Err(MmdError::UnsortedInput);
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when the univariate sortedness certificate holds.
    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    /// Flat view of the raw univariate values.
    ///
    /// Errors for multivariate samples.
    pub fn values(&self) -> Result<&[F]> {
        if self.dim != 1 {
            return Err(MmdError::NotUnivariate { dim: self.dim });
        }
        Ok(&self.data)
    }

    /// Sorted copy of a univariate sample, with the certificate set.
    /// Callers holding already-sorted data skip the sort.
    pub fn to_sorted(&self) -> Result<Self> {
        if self.dim != 1 {
            return Err(MmdError::NotUnivariate { dim: self.dim });
        }
        if self.sorted {
            return Ok(self.clone());
        }
        let mut data = self.data.clone();
        data.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite values are ordered"));
        Ok(Self {
            data,
            n: self.n,
            dim: 1,
            sorted: true,
        })
    }
}

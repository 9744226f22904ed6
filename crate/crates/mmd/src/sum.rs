//! Compensated accumulation.
//!
//! The matrix path serves as numerical ground truth for the fast path, so
//! its functionals are reduced with Neumaier's variant of Kahan summation
//! instead of plain `+=`.

use crate::float::Real;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy)]
pub struct NeumaierSum<F> {
    sum: F,
    compensation: F,
}

impl<F: Real> Default for NeumaierSum<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Real> NeumaierSum<F> {
    pub fn new() -> Self {
        Self {
            sum: F::zero(),
            compensation: F::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: F) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> F {
        self.sum + self.compensation
    }
}

/// Compensated sum of a slice.
pub fn sum<F: Real>(values: &[F]) -> F {
    let mut acc = NeumaierSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// Compensated sum of squares of a slice.
pub fn sum_of_squares<F: Real>(values: &[F]) -> F {
    let mut acc = NeumaierSum::new();
    for &v in values {
        acc.add(v * v);
    }
    acc.value()
}

/// Two-pass sample variance with Bessel's correction (1/(len-1)).
///
/// Returns zero for slices shorter than two elements.
pub fn sample_variance<F: Real>(values: &[F]) -> F {
    let len = values.len();
    if len < 2 {
        return F::zero();
    }
    let mean = sum(values) / F::from_count(len);
    let mut acc = NeumaierSum::new();
    for &v in values {
        let d = v - mean;
        acc.add(d * d);
    }
    acc.value() / F::from_count(len - 1)
}

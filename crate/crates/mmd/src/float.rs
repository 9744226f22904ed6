//! Scalar abstraction: estimators are generic over the floating type.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Floating-point scalar usable by every estimator in this crate (f32 or f64).
pub trait Real:
    Float + FromPrimitive + NumAssignOps + Debug + Display + Send + Sync + 'static
{
    /// Lossless conversion from a sample count.
    ///
    /// Counts in this crate never exceed the mantissa of the narrowest
    /// supported float by enough to matter for the coefficient arithmetic.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("sample count representable as scalar")
    }

    /// Falling factorial (n)_k = n (n-1) ... (n-k+1), computed in the
    /// scalar type so large sample sizes do not overflow integer math.
    fn falling_factorial(n: usize, k: usize) -> Self {
        let mut acc = Self::one();
        for step in 0..k {
            acc = acc * Self::from_count(n - step);
        }
        acc
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + NumAssignOps + Debug + Display + Send + Sync + 'static
{
}

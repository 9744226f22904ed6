//! Kernel evaluation, bandwidth selection, and the bandwidth-power identity.

use crate::error::{MmdError, Result};
use crate::float::Real;
use crate::sample::Sample;

/// Kernel family. Both are bounded by 1 and translation invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelFamily {
    /// `exp(-||x - y||_1 / sigma)`
    Laplacian,
    /// `exp(-||x - y||_2^2 / (2 sigma^2))`
    Gaussian,
}

/// Kernel family plus bandwidth, in the units of the input coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec<F> {
    family: KernelFamily,
    sigma: F,
}

impl<F: Real> KernelSpec<F> {
    pub fn new(family: KernelFamily, sigma: F) -> Result<Self> {
        if !(sigma.is_finite() && sigma > F::zero()) {
            return Err(MmdError::InvalidBandwidth {
                sigma: sigma.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { family, sigma })
    }

    pub fn laplacian(sigma: F) -> Result<Self> {
        Self::new(KernelFamily::Laplacian, sigma)
    }

    pub fn gaussian(sigma: F) -> Result<Self> {
        Self::new(KernelFamily::Gaussian, sigma)
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn sigma(&self) -> F {
        self.sigma
    }

    /// Kernel value for a pair of rows assumed same-dimensional and finite.
    /// For d > 1 the Laplacian uses the L1 distance, the Gaussian the
    /// squared L2 distance.
    #[inline]
    pub(crate) fn eval_unchecked(&self, x: &[F], y: &[F]) -> F {
        match self.family {
            KernelFamily::Laplacian => {
                let mut dist = F::zero();
                for (a, b) in x.iter().zip(y) {
                    dist += (*a - *b).abs();
                }
                (-dist / self.sigma).exp()
            }
            KernelFamily::Gaussian => {
                let mut sq = F::zero();
                for (a, b) in x.iter().zip(y) {
                    let d = *a - *b;
                    sq += d * d;
                }
                let two = F::from_count(2);
                (-sq / (two * self.sigma * self.sigma)).exp()
            }
        }
    }
}

/// Evaluate the kernel at a pair of points. Symmetric, with values in (0, 1].
pub fn kernel_eval<F: Real>(spec: &KernelSpec<F>, x: &[F], y: &[F]) -> Result<F> {
    if x.len() != y.len() || x.is_empty() {
        return Err(MmdError::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if !x.iter().chain(y).all(|v| v.is_finite()) {
        return Err(MmdError::NonFiniteInput);
    }
    Ok(spec.eval_unchecked(x, y))
}

/// Raise a Laplacian kernel to the `p`-th power by rescaling its bandwidth:
/// `k_L(x, y; sigma)^p = k_L(x, y; sigma / p)`.
///
/// The identity is specific to the Laplacian; the Gaussian family is
/// rejected. Both estimation paths use `p = 2` to turn squared-kernel sums
/// into plain kernel sums at half the bandwidth.
pub fn power_bandwidth<F: Real>(spec: &KernelSpec<F>, p: u32) -> Result<KernelSpec<F>> {
    if spec.family != KernelFamily::Laplacian {
        return Err(MmdError::UnsupportedFamily {
            family: spec.family,
        });
    }
    if p < 1 {
        return Err(MmdError::InvalidExponent);
    }
    KernelSpec::laplacian(spec.sigma / F::from_count(p as usize))
}

/// Median of the pairwise Euclidean distances over the pooled sample
/// `X ∪ Y`, self-pairs excluded.
///
/// Ties are handled in two stages: an even pair count averages the two
/// central order statistics, and a zero median (heavily tied data) falls
/// back to the smallest positive distance. Only when every pooled point
/// coincides is the bandwidth undefined.
pub fn median_heuristic<F: Real>(x: &Sample<F>, y: &Sample<F>) -> Result<F> {
    if x.dim() != y.dim() {
        return Err(MmdError::DimensionMismatch {
            left: x.dim(),
            right: y.dim(),
        });
    }
    let total = x.len() + y.len();
    if total < 2 {
        return Err(MmdError::InsufficientSample {
            needed: 2,
            n: x.len(),
            m: y.len(),
        });
    }

    let row = |i: usize| -> &[F] {
        if i < x.len() {
            x.row(i)
        } else {
            y.row(i - x.len())
        }
    };
    let mut dists = Vec::with_capacity(total * (total - 1) / 2);
    for i in 0..total {
        for j in (i + 1)..total {
            let (a, b) = (row(i), row(j));
            let mut sq = F::zero();
            for (u, v) in a.iter().zip(b) {
                let d = *u - *v;
                sq += d * d;
            }
            dists.push(sq.sqrt());
        }
    }

    let cmp = |a: &F, b: &F| a.partial_cmp(b).expect("finite distances are ordered");
    let len = dists.len();
    let median = if len % 2 == 1 {
        *dists.select_nth_unstable_by(len / 2, cmp).1
    } else {
        let hi = *dists.select_nth_unstable_by(len / 2, cmp).1;
        let lo = *dists[..len / 2]
            .iter()
            .max_by(|a, b| cmp(a, b))
            .expect("non-empty lower half");
        (lo + hi) / F::from_count(2)
    };
    if median > F::zero() {
        return Ok(median);
    }
    // Massive ties: fall back to the smallest positive distance.
    dists
        .into_iter()
        .filter(|d| *d > F::zero())
        .min_by(|a, b| cmp(a, b))
        .ok_or(MmdError::DegenerateSample)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lap(sigma: f64) -> KernelSpec<f64> {
        KernelSpec::laplacian(sigma).unwrap()
    }

    #[test]
    fn laplacian_pinned_values() {
        let k = lap(1.0);
        assert_eq!(kernel_eval(&k, &[0.0], &[0.0]).unwrap(), 1.0);
        let v = kernel_eval(&k, &[0.0], &[1.0]).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.3678794412).abs() < 1e-10);
    }

    #[test]
    fn gaussian_pinned_value() {
        let k = KernelSpec::gaussian(1.0).unwrap();
        let v = kernel_eval(&k, &[0.0], &[1.0]).unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-15);
        assert!((v - 0.6065306597).abs() < 1e-10);
    }

    #[test]
    fn multivariate_distances() {
        let k = lap(2.0);
        let v = kernel_eval(&k, &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15); // L1 = 2, sigma = 2

        let g = KernelSpec::gaussian(1.0).unwrap();
        let v = kernel_eval(&g, &[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15); // ||.||^2 = 2
    }

    #[test]
    fn eval_input_errors() {
        let k = lap(1.0);
        assert!(matches!(
            kernel_eval(&k, &[0.0], &[0.0, 1.0]),
            Err(MmdError::DimensionMismatch { .. })
        ));
        assert_eq!(
            kernel_eval(&k, &[f64::NAN], &[0.0]).unwrap_err(),
            MmdError::NonFiniteInput
        );
    }

    #[test]
    fn bad_bandwidth_rejected() {
        assert!(KernelSpec::laplacian(0.0).is_err());
        assert!(KernelSpec::laplacian(-1.0).is_err());
        assert!(KernelSpec::laplacian(f64::NAN).is_err());
    }

    #[test]
    fn power_bandwidth_scaling() {
        let k = lap(1.0);
        assert_eq!(power_bandwidth(&k, 2).unwrap().sigma(), 0.5);
        assert_eq!(power_bandwidth(&lap(3.0), 1).unwrap().sigma(), 3.0);
        assert!(matches!(
            power_bandwidth(&KernelSpec::gaussian(1.0).unwrap(), 2),
            Err(MmdError::UnsupportedFamily { .. })
        ));

        // e^{-|0-1|/1} squared equals e^{-2} = e^{-|0-1|/0.5}.
        let squared = kernel_eval(&k, &[0.0], &[1.0]).unwrap().powi(2);
        let rescaled = kernel_eval(&power_bandwidth(&k, 2).unwrap(), &[0.0], &[1.0]).unwrap();
        assert!((squared - rescaled).abs() < 1e-16);
        assert!((squared - (-2.0f64).exp()).abs() < 1e-16);
    }

    fn uni(values: &[f64]) -> Sample<f64> {
        Sample::univariate(values.to_vec()).unwrap()
    }

    #[test]
    fn median_single_pair() {
        assert_eq!(median_heuristic(&uni(&[0.0]), &uni(&[2.0])).unwrap(), 2.0);
    }

    #[test]
    fn median_three_points() {
        // Pooled {0, 1, 2}: distances {1, 2, 1}, median 1.
        assert_eq!(
            median_heuristic(&uni(&[0.0, 1.0]), &uni(&[2.0])).unwrap(),
            1.0
        );
    }

    #[test]
    fn median_even_count_averages() {
        // Pooled {0, 1, 2, 4}: distances {1, 2, 4, 1, 3, 2} -> (2 + 2) / 2.
        assert_eq!(
            median_heuristic(&uni(&[0.0, 1.0]), &uni(&[2.0, 4.0])).unwrap(),
            2.0
        );
    }

    #[test]
    fn median_degenerate_and_fallback() {
        assert_eq!(
            median_heuristic(&uni(&[0.0, 0.0]), &uni(&[0.0])).unwrap_err(),
            MmdError::DegenerateSample
        );
        // Median of {0 x6, 1 x4} is 0; fall back to smallest positive.
        assert_eq!(
            median_heuristic(&uni(&[0.0, 0.0, 0.0, 0.0]), &uni(&[1.0])).unwrap(),
            1.0
        );
    }
}

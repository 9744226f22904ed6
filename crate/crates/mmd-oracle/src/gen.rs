//! Deterministic test-instance generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mmd::Sample;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw strictly inside (0, 1).
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.gen::<u64>() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Laplace(mu, b) via the inverse CDF.
pub fn laplace(rng: &mut ChaCha8Rng, mu: f64, b: f64) -> f64 {
    let u = open_unit(rng) - 0.5;
    mu - b * u.signum() * (1.0 - 2.0 * u.abs()).ln()
}

pub fn laplace_vec(rng: &mut ChaCha8Rng, n: usize, mu: f64, b: f64) -> Vec<f64> {
    (0..n).map(|_| laplace(rng, mu, b)).collect()
}

/// Two-component Laplace mixture with randomized per-call parameters.
pub fn laplace_mixture_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w = rng.gen_range(0.3..0.7);
    let mu2 = rng.gen_range(-2.0..2.0);
    let b1 = rng.gen_range(0.5..2.0);
    let b2 = rng.gen_range(0.5..2.0);
    (0..n)
        .map(|_| {
            if open_unit(rng) < w {
                laplace(rng, 0.0, b1)
            } else {
                laplace(rng, mu2, b2)
            }
        })
        .collect()
}

/// Quantize values to a coarse grid so duplicates are common.
pub fn quantize(values: &mut [f64], step: f64) {
    for v in values.iter_mut() {
        *v = (*v / step).round() * step;
    }
}

pub fn univariate_sample(values: Vec<f64>) -> Sample<f64> {
    Sample::univariate(values).expect("generated values are finite and non-empty")
}

//! Scenario configuration and deterministic sample generation.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mmd::{median_heuristic, KernelFamily, KernelSpec, Sample};

use crate::error::{HarnessError, Result};

/// Source distribution pair. X ~ Laplace(0, 1), Y ~ Laplace(delta, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourcePair {
    LaplaceLaplace,
}

/// Bandwidth policy for a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelChoice {
    /// Recompute the pooled median heuristic for every replicate.
    MedianHeuristic { family: KernelFamily },
    /// Use one fixed kernel for all replicates.
    Fixed(KernelSpec<f64>),
}

impl KernelChoice {
    pub fn family(&self) -> KernelFamily {
        match self {
            KernelChoice::MedianHeuristic { family } => *family,
            KernelChoice::Fixed(spec) => spec.family(),
        }
    }
}

/// One Monte Carlo scenario: sizes, shift, kernel policy, replication.
///
/// The seed fully determines the generated sample stream; replicate `r`
/// draws from dedicated counter-derived substreams so replicates can run
/// in any order or in parallel without sequence coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub n: usize,
    /// m = round(ratio * n).
    pub ratio: f64,
    /// Location shift of the Y distribution.
    pub delta: f64,
    pub family: SourcePair,
    pub kernel: KernelChoice,
    pub replicates: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn m(&self) -> usize {
        (self.ratio * self.n as f64).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ratio.is_finite() && self.ratio > 0.0) {
            return Err(HarnessError::Config(format!(
                "ratio must be positive and finite, got {}",
                self.ratio
            )));
        }
        if self.n < 4 || self.m() < 4 {
            return Err(HarnessError::Config(format!(
                "need n >= 4 and round(ratio*n) >= 4, got n={} m={}",
                self.n,
                self.m()
            )));
        }
        if !self.delta.is_finite() {
            return Err(HarnessError::Config("delta must be finite".into()));
        }
        if self.replicates < 1 {
            return Err(HarnessError::Config("replicates must be >= 1".into()));
        }
        Ok(())
    }
}

/// Uniform draw strictly inside (0, 1): 53-bit midpoint grid, so the
/// inverse CDF below never sees 0 or 1.
fn uniform_open(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

/// Laplace(mu, b) quantile function.
pub fn laplace_inverse_cdf(u: f64, mu: f64, b: f64) -> f64 {
    let c = u - 0.5;
    mu - b * c.signum() * (1.0 - 2.0 * c.abs()).ln()
}

fn stream_rng(seed: u64, replicate: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate * 2 + stream);
    rng
}

fn laplace_draw(seed: u64, replicate: u64, stream: u64, len: usize, mu: f64) -> Vec<f64> {
    let mut rng = stream_rng(seed, replicate, stream);
    (0..len)
        .map(|_| laplace_inverse_cdf(uniform_open(&mut rng), mu, 1.0))
        .collect()
}

/// Samples for one replicate of a scenario.
pub fn generate_replicate(
    cfg: &ScenarioConfig,
    replicate: usize,
) -> Result<(Sample<f64>, Sample<f64>)> {
    cfg.validate()?;
    let SourcePair::LaplaceLaplace = cfg.family;
    let x = laplace_draw(cfg.seed, replicate as u64, 0, cfg.n, 0.0);
    let y = laplace_draw(cfg.seed, replicate as u64, 1, cfg.m(), cfg.delta);
    Ok((Sample::univariate(x)?, Sample::univariate(y)?))
}

/// Samples for replicate 0; deterministic in (config, seed).
pub fn generate_scenario(cfg: &ScenarioConfig) -> Result<(Sample<f64>, Sample<f64>)> {
    generate_replicate(cfg, 0)
}

/// Resolve the scenario's kernel for one concrete pair of samples.
pub fn resolve_kernel(
    kernel: &KernelChoice,
    x: &Sample<f64>,
    y: &Sample<f64>,
) -> Result<KernelSpec<f64>> {
    match kernel {
        KernelChoice::Fixed(spec) => Ok(*spec),
        KernelChoice::MedianHeuristic { family } => {
            Ok(KernelSpec::new(*family, median_heuristic(x, y)?)?)
        }
    }
}

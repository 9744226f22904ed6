//! Replicated estimation with a deterministic reduction order.

use rayon::prelude::*;

use mmd::{exact, fast, KernelFamily, MmdReport, Sample};

use crate::error::{HarnessError, Result};
use crate::output::{RowKind, RowStatus, SweepRow};
use crate::scenario::{generate_replicate, resolve_kernel, ScenarioConfig};
use crate::stats;

pub(crate) struct ReplicateOutcome {
    pub mmd2: f64,
    pub var_t1: f64,
    pub var_t2: f64,
    pub var_total: f64,
    pub sigma: f64,
}

/// Scenario estimate: fast path for the Laplacian kernel on univariate
/// data, matrix path otherwise.
pub(crate) fn estimate_pair(
    x: &Sample<f64>,
    y: &Sample<f64>,
    kernel: &crate::scenario::KernelChoice,
) -> mmd::Result<MmdReport<f64>> {
    let spec = match resolve_kernel(kernel, x, y) {
        Ok(spec) => spec,
        Err(HarnessError::Estimator(e)) => return Err(e),
        Err(_) => unreachable!("kernel resolution only fails on estimator errors"),
    };
    if spec.family() == KernelFamily::Laplacian && x.dim() == 1 && y.dim() == 1 {
        fast::variance_fast(x, y, spec.sigma())
    } else {
        exact::variance_full(x, y, &spec)
    }
}

fn run_replicate(cfg: &ScenarioConfig, index: usize) -> Result<ReplicateOutcome> {
    let (x, y) = generate_replicate(cfg, index)?;
    let report = estimate_pair(&x, &y, &cfg.kernel)
        .map_err(|source| HarnessError::Replicate { index, source })?;
    Ok(ReplicateOutcome {
        mmd2: report.mmd2,
        var_t1: report.var_t1,
        var_t2: report.var_t2,
        var_total: report.var_total,
        sigma: report.spec.sigma(),
    })
}

pub(crate) fn aggregate_row(
    cfg: &ScenarioConfig,
    delta: f64,
    kind: RowKind,
    outcomes: &[ReplicateOutcome],
) -> SweepRow {
    let mmd2s: Vec<f64> = outcomes.iter().map(|o| o.mmd2).collect();
    let path = match cfg.kernel.family() {
        KernelFamily::Laplacian => "fast",
        KernelFamily::Gaussian => "matrix",
    };
    SweepRow {
        kind,
        n: cfg.n,
        m: cfg.m(),
        delta,
        sigma: stats::mean(&outcomes.iter().map(|o| o.sigma).collect::<Vec<_>>()),
        replicates: outcomes.len(),
        path: path.into(),
        mean_mmd2: stats::mean(&mmd2s),
        emp_var_mmd2: Some(stats::sample_variance(&mmd2s)),
        mean_var_t1: stats::mean(&outcomes.iter().map(|o| o.var_t1).collect::<Vec<_>>()),
        mean_var_t2: stats::mean(&outcomes.iter().map(|o| o.var_t2).collect::<Vec<_>>()),
        mean_var_total: stats::mean(&outcomes.iter().map(|o| o.var_total).collect::<Vec<_>>()),
        wall_median_s: None,
        wall_min_s: None,
        wall_max_s: None,
        peak_alloc_bytes: None,
        status: RowStatus::Ok,
    }
}

/// Run `cfg.replicates` independent draws (at least 100) and aggregate the
/// estimator outputs together with the empirical variance of `mmd2`.
///
/// Replicates run in parallel; the reduction folds them in replicate
/// order, so the row is identical for any thread count.
pub fn monte_carlo_variance(cfg: &ScenarioConfig) -> Result<SweepRow> {
    cfg.validate()?;
    if cfg.replicates < 100 {
        return Err(HarnessError::Config(format!(
            "monte_carlo_variance needs >= 100 replicates, got {}",
            cfg.replicates
        )));
    }
    let outcomes: Vec<ReplicateOutcome> = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| run_replicate(cfg, rep))
        .collect::<Result<_>>()?;
    Ok(aggregate_row(cfg, cfg.delta, RowKind::MonteCarlo, &outcomes))
}

//! Distribution-shift sweep: one set of draws, translated Y.

use rayon::prelude::*;

use mmd::Sample;

use crate::error::{HarnessError, Result};
use crate::monte_carlo::{aggregate_row, estimate_pair, ReplicateOutcome};
use crate::output::{RowKind, SweepResult};
use crate::scenario::{generate_replicate, ScenarioConfig};

/// Evaluate the estimator across location shifts.
///
/// Every replicate draws X and a base Y at delta = 0 once, then applies
/// each shift as a deterministic translation of the same Y realization, so
/// the curves expose the shift effect without fresh sampling noise per
/// delta. The base config's `delta` field is ignored. One row per delta.
pub fn shift_sweep(cfg: &ScenarioConfig, deltas: &[f64]) -> Result<SweepResult> {
    cfg.validate()?;
    if deltas.is_empty() {
        return Err(HarnessError::Config("empty delta grid".into()));
    }
    if let Some(bad) = deltas.iter().find(|d| !d.is_finite()) {
        return Err(HarnessError::Config(format!("non-finite delta {bad}")));
    }
    let base = ScenarioConfig {
        delta: 0.0,
        ..cfg.clone()
    };

    // outcomes[replicate][delta]
    let per_replicate: Vec<Vec<ReplicateOutcome>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|rep| -> Result<Vec<ReplicateOutcome>> {
            let (x, y0) = generate_replicate(&base, rep)?;
            let y0v = y0.values()?.to_vec();
            deltas
                .iter()
                .map(|&delta| {
                    let shifted: Vec<f64> = y0v.iter().map(|v| v + delta).collect();
                    let y = Sample::univariate(shifted)?;
                    let report = estimate_pair(&x, &y, &cfg.kernel)
                        .map_err(|source| HarnessError::Replicate { index: rep, source })?;
                    Ok(ReplicateOutcome {
                        mmd2: report.mmd2,
                        var_t1: report.var_t1,
                        var_t2: report.var_t2,
                        var_total: report.var_total,
                        sigma: report.spec.sigma(),
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;

    let rows = deltas
        .iter()
        .enumerate()
        .map(|(di, &delta)| {
            let column: Vec<ReplicateOutcome> = per_replicate
                .iter()
                .map(|reps| {
                    let o = &reps[di];
                    ReplicateOutcome {
                        mmd2: o.mmd2,
                        var_t1: o.var_t1,
                        var_t2: o.var_t2,
                        var_total: o.var_total,
                        sigma: o.sigma,
                    }
                })
                .collect();
            aggregate_row(&base, delta, RowKind::Shift, &column)
        })
        .collect();
    Ok(SweepResult { rows })
}

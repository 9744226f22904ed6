//! Runtime / memory scaling benchmark over sample size.

use std::time::Instant;

use mmd::exact::{self, MatrixMode};
use mmd::{fast, KernelSpec, Sample};

use crate::alloc;
use crate::error::{HarnessError, Result};
use crate::output::{RowKind, RowStatus, SweepRow, SweepResult};
use crate::scenario::{generate_replicate, ScenarioConfig, SourcePair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathChoice {
    Fast,
    Matrix,
}

impl PathChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            PathChoice::Fast => "fast",
            PathChoice::Matrix => "matrix",
        }
    }
}

/// Benchmark grid configuration.
///
/// The bandwidth is fixed because a pooled median heuristic is itself
/// quadratic and would dwarf the fast path at large n. The matrix path is
/// benchmarked in materialized (full kernel block) mode — the memory
/// behavior the quadratic algorithm is known for — and sizes beyond
/// `matrix_cap` are recorded as capped rows rather than attempted.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub ratio: f64,
    pub paths: Vec<PathChoice>,
    /// Timed runs per cell (median reported), after one warmup run.
    pub runs: usize,
    pub matrix_cap: usize,
    pub sigma: f64,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            sizes: vec![1_000, 10_000, 100_000, 1_000_000],
            ratio: 1.2,
            paths: vec![PathChoice::Fast, PathChoice::Matrix],
            runs: 20,
            matrix_cap: 10_000,
            sigma: 1.0,
            seed: 0xbe9c4,
        }
    }
}

fn capped_row(n: usize, m: usize, cfg: &BenchConfig, path: PathChoice) -> SweepRow {
    SweepRow {
        kind: RowKind::Bench,
        n,
        m,
        delta: 1.0,
        sigma: cfg.sigma,
        replicates: 0,
        path: path.as_str().into(),
        mean_mmd2: f64::NAN,
        emp_var_mmd2: None,
        mean_var_t1: f64::NAN,
        mean_var_t2: f64::NAN,
        mean_var_total: f64::NAN,
        wall_median_s: None,
        wall_min_s: None,
        wall_max_s: None,
        peak_alloc_bytes: None,
        status: RowStatus::Capped,
    }
}

fn run_once(
    x: &Sample<f64>,
    y: &Sample<f64>,
    sigma: f64,
    path: PathChoice,
) -> Result<(mmd::MmdReport64, f64, Option<usize>)> {
    let tracking = alloc::is_active();
    let base = alloc::current_bytes();
    alloc::reset_peak();
    let started = Instant::now();
    let report = match path {
        PathChoice::Fast => fast::variance_fast(x, y, sigma)?,
        PathChoice::Matrix => {
            let spec = KernelSpec::laplacian(sigma)?;
            exact::variance_full_with(x, y, &spec, MatrixMode::Materialized)?
        }
    };
    let elapsed = started.elapsed().as_secs_f64();
    let peak = tracking.then(|| alloc::peak_bytes().saturating_sub(base));
    Ok((report, elapsed, peak))
}

/// Wall-clock medians and peak additional allocation per (size, path).
pub fn scaling_benchmark(cfg: &BenchConfig) -> Result<SweepResult> {
    if cfg.sizes.is_empty() || cfg.paths.is_empty() || cfg.runs == 0 {
        return Err(HarnessError::Config(
            "bench needs sizes, paths and runs >= 1".into(),
        ));
    }
    let mut rows = Vec::new();
    for &path in &cfg.paths {
        for &n in &cfg.sizes {
            let scenario = ScenarioConfig {
                n,
                ratio: cfg.ratio,
                delta: 1.0,
                family: SourcePair::LaplaceLaplace,
                kernel: crate::scenario::KernelChoice::Fixed(KernelSpec::laplacian(
                    cfg.sigma,
                )?),
                replicates: 1,
                seed: cfg.seed,
            };
            let m = scenario.m();
            if path == PathChoice::Matrix && n > cfg.matrix_cap {
                rows.push(capped_row(n, m, cfg, path));
                continue;
            }
            let (x, y) = generate_replicate(&scenario, 0)?;

            let _ = run_once(&x, &y, cfg.sigma, path)?; // warmup
            let mut times = Vec::with_capacity(cfg.runs);
            let mut peak_max: Option<usize> = None;
            let mut last = None;
            for _ in 0..cfg.runs {
                let (report, secs, peak) = run_once(&x, &y, cfg.sigma, path)?;
                times.push(secs);
                if let Some(p) = peak {
                    peak_max = Some(peak_max.map_or(p, |q| q.max(p)));
                }
                last = Some(report);
            }
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let report = last.expect("runs >= 1");
            rows.push(SweepRow {
                kind: RowKind::Bench,
                n,
                m,
                delta: 1.0,
                sigma: cfg.sigma,
                replicates: cfg.runs,
                path: path.as_str().into(),
                mean_mmd2: report.mmd2,
                emp_var_mmd2: None,
                mean_var_t1: report.var_t1,
                mean_var_t2: report.var_t2,
                mean_var_total: report.var_total,
                wall_median_s: Some(times[times.len() / 2]),
                wall_min_s: Some(times[0]),
                wall_max_s: Some(*times.last().unwrap()),
                peak_alloc_bytes: peak_max,
                status: RowStatus::Ok,
            });
        }
    }
    Ok(SweepResult { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_runs_and_caps() {
        let cfg = BenchConfig {
            sizes: vec![64, 256],
            ratio: 1.2,
            paths: vec![PathChoice::Fast, PathChoice::Matrix],
            runs: 3,
            matrix_cap: 100,
            sigma: 1.0,
            seed: 1,
        };
        let result = scaling_benchmark(&cfg).unwrap();
        assert_eq!(result.rows.len(), 4);
        let capped: Vec<_> = result
            .rows
            .iter()
            .filter(|r| r.status == RowStatus::Capped)
            .collect();
        assert_eq!(capped.len(), 1);
        assert_eq!(capped[0].n, 256);
        assert_eq!(capped[0].path, "matrix");
        for row in result.rows.iter().filter(|r| r.status == RowStatus::Ok) {
            assert!(row.wall_median_s.unwrap() >= 0.0);
            assert!(row.mean_var_total.is_finite());
        }
    }

    #[test]
    fn fast_and_matrix_agree_on_bench_data() {
        let cfg = BenchConfig {
            sizes: vec![128],
            ratio: 1.0,
            paths: vec![PathChoice::Fast, PathChoice::Matrix],
            runs: 1,
            matrix_cap: 10_000,
            sigma: 1.0,
            seed: 2,
        };
        let result = scaling_benchmark(&cfg).unwrap();
        let fast = &result.rows[0];
        let matrix = &result.rows[1];
        assert!((fast.mean_mmd2 - matrix.mean_mmd2).abs() < 1e-10);
        assert!((fast.mean_var_total - matrix.mean_var_total).abs() < 1e-10);
    }
}

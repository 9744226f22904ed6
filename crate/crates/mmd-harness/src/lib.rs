//! Scenario generation, Monte Carlo validation, distribution-shift sweeps,
//! and runtime/memory scaling benchmarks for the `mmd` estimators.
//!
//! All randomness flows through counter-style ChaCha streams keyed by
//! `(seed, replicate)`, so replicates parallelize freely and every result
//! row is a pure function of its configuration. Statistical outputs are
//! bit-reproducible across runs and thread counts; timing and memory
//! fields appear only on benchmark rows.

pub mod alloc;
pub mod bench;
pub mod error;
pub mod monte_carlo;
pub mod output;
pub mod scenario;
pub mod stats;
pub mod sweep;

pub use bench::{scaling_benchmark, BenchConfig, PathChoice};
pub use error::{HarnessError, Result};
pub use monte_carlo::monte_carlo_variance;
pub use output::{RowKind, RowStatus, SweepResult, SweepRow};
pub use scenario::{
    generate_replicate, generate_scenario, resolve_kernel, KernelChoice, ScenarioConfig,
    SourcePair,
};
pub use sweep::shift_sweep;

/// Cap the rayon worker count from `MMDVAR_THREADS`, when set.
///
/// Call once at process start; later calls are no-ops once a global pool
/// exists.
pub fn configure_threads_from_env() {
    if let Ok(raw) = std::env::var("MMDVAR_THREADS") {
        if let Ok(threads) = raw.trim().parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

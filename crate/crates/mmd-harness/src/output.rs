//! Result rows and their CSV / JSON emission.
//!
//! Column order is stable. Statistical fields of monte-carlo and shift
//! rows are a pure function of (config, seed) and emit bit-identical
//! bytes across runs and thread counts; timing and memory cells are only
//! populated for benchmark rows, which are inherently non-reproducible.

use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowKind {
    MonteCarlo,
    Shift,
    Bench,
}

impl RowKind {
    fn as_str(&self) -> &'static str {
        match self {
            RowKind::MonteCarlo => "monte_carlo",
            RowKind::Shift => "shift",
            RowKind::Bench => "bench",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// Matrix path skipped beyond its size cap; no measurement was run.
    Capped,
}

impl RowStatus {
    fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Capped => "capped",
        }
    }
}

/// One aggregated result row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub kind: RowKind,
    pub n: usize,
    pub m: usize,
    pub delta: f64,
    /// Mean resolved bandwidth across replicates.
    pub sigma: f64,
    pub replicates: usize,
    pub path: String,
    pub mean_mmd2: f64,
    pub emp_var_mmd2: Option<f64>,
    pub mean_var_t1: f64,
    pub mean_var_t2: f64,
    pub mean_var_total: f64,
    pub wall_median_s: Option<f64>,
    pub wall_min_s: Option<f64>,
    pub wall_max_s: Option<f64>,
    pub peak_alloc_bytes: Option<usize>,
    pub status: RowStatus,
}

pub const CSV_HEADER: &str = "kind,n,m,delta,sigma,replicates,path,mean_mmd2,emp_var_mmd2,\
mean_var_t1,mean_var_t2,mean_var_total,wall_median_s,wall_min_s,wall_max_s,peak_alloc_bytes,status";

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        let mut line = String::new();
        write!(
            line,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind.as_str(),
            self.n,
            self.m,
            self.delta,
            self.sigma,
            self.replicates,
            self.path,
            self.mean_mmd2,
            opt(&self.emp_var_mmd2),
            self.mean_var_t1,
            self.mean_var_t2,
            self.mean_var_total,
            opt(&self.wall_median_s),
            opt(&self.wall_min_s),
            opt(&self.wall_max_s),
            opt(&self.peak_alloc_bytes),
            self.status.as_str(),
        )
        .expect("write to string");
        line
    }
}

/// Ordered collection of rows; one row per sweep-grid cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.csv_line());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

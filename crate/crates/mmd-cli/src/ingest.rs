//! Sample ingestion: CSV rows or a raw little-endian f64 column.

use std::fs;
use std::path::Path;

use mmd::Sample;

use crate::errors::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InputFormat {
    /// One observation per line, comma-separated coordinates.
    Csv,
    /// Little-endian 64-bit float column (univariate only).
    Raw,
}

pub fn ingest(path: &Path, format: InputFormat) -> Result<Sample<f64>, CliError> {
    match format {
        InputFormat::Csv => ingest_csv(path),
        InputFormat::Raw => ingest_raw(path),
    }
}

fn ingest_error(path: &Path, message: String) -> CliError {
    CliError::ingest(format!("{}: {message}", path.display()))
}

fn ingest_csv(path: &Path) -> Result<Sample<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| ingest_error(path, format!("cannot read: {e}")))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut dim: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            return Err(ingest_error(path, format!("empty row at line {line_no}")));
        }
        let mut row = Vec::new();
        for field in line.split(',') {
            let value: f64 = field.trim().parse().map_err(|_| {
                ingest_error(path, format!("unparsable value {field:?} at line {line_no}"))
            })?;
            if !value.is_finite() {
                return Err(ingest_error(
                    path,
                    format!("non-finite value at line {line_no}"),
                ));
            }
            row.push(value);
        }
        match dim {
            None => dim = Some(row.len()),
            Some(d) if d != row.len() => {
                return Err(ingest_error(
                    path,
                    format!("ragged row at line {line_no}: expected {d} columns, got {}", row.len()),
                ));
            }
            Some(_) => {}
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(ingest_error(path, "empty file".into()));
    }
    Sample::from_rows(&rows).map_err(|e| ingest_error(path, e.to_string()))
}

fn ingest_raw(path: &Path) -> Result<Sample<f64>, CliError> {
    let bytes = fs::read(path).map_err(|e| ingest_error(path, format!("cannot read: {e}")))?;
    if bytes.is_empty() {
        return Err(ingest_error(path, "empty file".into()));
    }
    if bytes.len() % 8 != 0 {
        return Err(ingest_error(
            path,
            format!("length {} is not a multiple of 8", bytes.len()),
        ));
    }
    let mut values = Vec::with_capacity(bytes.len() / 8);
    for (i, chunk) in bytes.chunks_exact(8).enumerate() {
        let value = f64::from_le_bytes(chunk.try_into().expect("chunk of 8"));
        if !value.is_finite() {
            return Err(ingest_error(path, format!("non-finite value at element {}", i + 1)));
        }
        values.push(value);
    }
    Sample::univariate(values).map_err(|e| ingest_error(path, e.to_string()))
}

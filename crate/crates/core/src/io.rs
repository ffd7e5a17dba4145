//! File formats the CLI exchanges: JSON artifacts that carry their producing
//! configuration alongside the result, and a versioned CSV table writer for
//! parameter sweeps.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::linalg::DenseMatrix;
use crate::Result;

/// Every JSON artifact is wrapped so the configuration that produced the
/// result travels with it verbatim.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Output<C, R> {
    pub config: C,
    pub result: R,
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Matrix-file payload: a basis/factor under `r` (or bare), a pair of
/// Gram matrices under `g1`/`g2` for the sum and inverse bound reports, or a
/// whole `reduce` output document whose `result.r` carries the factor, so
/// reduction outputs chain into the other commands without manual surgery.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixInput {
    Single { r: DenseMatrix },
    Pair { g1: DenseMatrix, g2: DenseMatrix },
    Wrapped { result: ReducedFactor },
    Bare(DenseMatrix),
}

/// The slice of a reduction output document that downstream commands read.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReducedFactor {
    pub r: DenseMatrix,
}

/// Format version stamped into the CSV header comment.
pub const CSV_VERSION: &str = "1";

/// Renders a CSV table: a version comment, a comment echoing the run
/// configuration, the fixed column header, then the rows.
pub fn csv_string<C: Serialize>(
    config: &C,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<String> {
    let mut text = format!("# latmin csv v{CSV_VERSION}\n# config: ");
    text.push_str(&serde_json::to_string(config)?);
    text.push('\n');
    text.push_str(&columns.join(","));
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    Ok(text)
}

pub fn write_csv<C: Serialize>(
    path: &Path,
    config: &C,
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    fs::write(path, csv_string(config, columns, rows)?)?;
    Ok(())
}

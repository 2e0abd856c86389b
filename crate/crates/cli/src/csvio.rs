//! CSV tables with a fixed header; values use 17 significant digits so a
//! read-back reproduces every `f64` exactly.

use crate::error::{CliError, Result};
use msdd_core::dynamics::DiagnosticsRow;
use msdd_core::Row;
use std::path::Path;

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|v| format_value(*v)))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))?;
    Ok(())
}

/// Reads a table whose header must contain every name in `required`.
/// Returns the full header and the rows.
pub fn read_table(path: &Path, required: &[&str]) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.iter().all(|h| h.is_empty()) {
        return Err(CliError::Schema(format!("{}: no header", path.display())));
    }
    for name in required {
        if !header.iter().any(|h| h == name) {
            return Err(CliError::Schema(format!("{}: missing column `{name}`", path.display())));
        }
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| CliError::Schema(format!("{} row {}: {e}", path.display(), i + 1)))?;
        if vals.len() != header.len() {
            return Err(CliError::Schema(format!(
                "{} row {}: {} fields for {} columns",
                path.display(),
                i + 1,
                vals.len(),
                header.len()
            )));
        }
        rows.push(vals);
    }
    Ok((header, rows))
}

pub fn write_diagnostics(path: &Path, rows: &[Row]) -> Result<()> {
    write_table(path, &DiagnosticsRow::<f64>::COLUMNS, rows.iter().map(|r| r.values().to_vec()))
}

/// Reads a diagnostics file; the header must match the fixed column order.
pub fn read_diagnostics(path: &Path) -> Result<Vec<Row>> {
    let cols = DiagnosticsRow::<f64>::COLUMNS;
    let (header, rows) = read_table(path, &cols)?;
    if header != cols {
        return Err(CliError::Schema(format!(
            "{}: columns {:?} differ from {:?}",
            path.display(),
            header,
            cols
        )));
    }
    Ok(rows
        .into_iter()
        .map(|v| DiagnosticsRow::from_values(v.try_into().expect("length checked")))
        .collect())
}

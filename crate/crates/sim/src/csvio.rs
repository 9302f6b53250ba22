//! CSV files for series, snapshots and plot data.
//!
//! Numbers are written with 17 significant digits so every `f64` survives a
//! round trip.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use collapse_core::{Record, Snapshot, TimeSeries};

use crate::error::CliError;

pub const SERIES_HEADER: [&str; 4] = ["t", "x_L", "x_R", "h_max"];
pub const SNAPSHOT_HEADER: [&str; 3] = ["xi", "h", "x_phys"];

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    let file = File::create(path)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    Ok(csv::Writer::from_writer(file))
}

/// Writes named columns of equal length.
pub fn write_columns(path: &Path, header: &[&str], columns: &[&[f64]]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| fmt(c[i])))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_series(path: &Path, series: &TimeSeries) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(SERIES_HEADER)?;
    for r in &series.records {
        w.write_record([fmt(r.t), fmt(r.x_left), fmt(r.x_right), fmt(r.h_max)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(SNAPSHOT_HEADER)?;
    for (i, &h) in snap.h.iter().enumerate() {
        w.write_record([fmt(snap.xi(i)), fmt(h), fmt(snap.x_phys(i))])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>, CliError> {
    let mut r = csv::Reader::from_path(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let found: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if found != header {
        return Err(CliError::config(format!(
            "{}: expected header {}, found {}",
            path.display(),
            header.join(","),
            found.join(",")
        )));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::config(format!("{}: row {}: {e}", path.display(), line + 1)))?;
        rows.push(row);
    }
    Ok(rows)
}

/// Reads a series file. Time must increase strictly and the support must have
/// positive width in every row.
pub fn read_series(path: &Path) -> Result<TimeSeries, CliError> {
    let rows = parse_rows(path, &SERIES_HEADER)?;
    let mut records = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let rec = Record {
            t: row[0],
            x_left: row[1],
            x_right: row[2],
            h_max: row[3],
        };
        if !(rec.half_width() > 0.0) {
            return Err(CliError::config(format!(
                "{}: row {}: support has no width",
                path.display(),
                i + 1
            )));
        }
        if records.last().is_some_and(|p: &Record| rec.t <= p.t) {
            return Err(CliError::config(format!(
                "{}: row {}: time does not increase",
                path.display(),
                i + 1
            )));
        }
        records.push(rec);
    }
    Ok(TimeSeries::from_records(records))
}

/// Reads a snapshot file back into `(ξ, h, x)` columns.
pub fn read_snapshot(path: &Path) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>), CliError> {
    let rows = parse_rows(path, &SNAPSHOT_HEADER)?;
    let mut out = (Vec::new(), Vec::new(), Vec::new());
    for row in rows {
        out.0.push(row[0]);
        out.1.push(row[1]);
        out.2.push(row[2]);
    }
    Ok(out)
}

/// Writes a JSON value with a trailing newline.
pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    let mut f = File::create(path)
        .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::config(format!("cannot encode json: {e}")))?;
    writeln!(f, "{text}")?;
    Ok(())
}

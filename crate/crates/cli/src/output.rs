//! CSV and JSON writers. Every CSV opens with one `#` line carrying the
//! timestamp; everything after it depends only on the scenario.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct MetricRow {
    pub domain: &'static str,
    pub m: usize,
    pub beta: f64,
    pub x1: f64,
    pub x2: f64,
    pub y1: f64,
    pub y2: f64,
    pub d0: f64,
    pub dg_lower: f64,
    pub dg_upper: f64,
    pub dmb_lower: f64,
    pub sandwich_factor: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct DiagonalRow {
    pub t: f64,
    pub sup_diagonal: f64,
    /// `sup_x K(t,x,x) t^{N/2m}`.
    pub scaled: f64,
    pub lambda_min_t: f64,
}

#[derive(Debug, Serialize)]
pub struct RatioRow {
    pub bound: &'static str,
    pub t: f64,
    pub d: f64,
    pub value: f64,
    /// `|K| / rhs` with unit amplitude.
    pub ratio: f64,
}

#[derive(Debug, Serialize)]
pub struct BoundRow {
    pub bound: &'static str,
    pub fitted_c2: Option<f64>,
    pub fitted_c1: Option<f64>,
    pub k: f64,
    pub samples: usize,
    pub max_ratio: f64,
    pub window: [f64; 2],
}

pub fn write_csv<T: Serialize>(path: &Path, scenario: &str, rows: &[T]) -> anyhow::Result<()> {
    let mut file = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(
        file,
        "# heatbound {} scenario {scenario} generated {}",
        env!("CARGO_PKG_VERSION"),
        chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
    )?;
    let mut w = csv::Writer::from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut file = BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?);
    serde_json::to_writer_pretty(&mut file, value)?;
    writeln!(file)?;
    Ok(())
}

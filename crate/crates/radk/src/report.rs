//! Report emission: CSV rows or a JSON mirror of the full report, bit-stable
//! across runs with equal seeds.

use std::io::Write;
use std::path::Path;

use crate::experiment::EquivalenceReport;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config {
                field: "format",
                message: format!("expected csv or json, got `{other}`"),
            }),
        }
    }
}

/// CSV with the fixed column set `experiment_id,t,sample_index,lhs,rhs,ratio`;
/// one row per (t, sample) cell. Float formatting is shortest-round-trip, so
/// equal seeds give byte-identical output.
pub fn to_csv(report: &EquivalenceReport) -> String {
    let mut out = String::with_capacity(64 * (report.rows.len() + 1));
    out.push_str("experiment_id,t,sample_index,lhs,rhs,ratio\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            report.experiment_id, row.t, row.sample_index, row.lhs, row.rhs, row.ratio
        ));
    }
    out
}

/// JSON mirror of the report; `parse(emit(r)) == r`.
pub fn to_json(report: &EquivalenceReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json(text: &str) -> Result<EquivalenceReport> {
    Ok(serde_json::from_str(text)?)
}

/// Writes the report to `path`; I/O failures carry the path.
pub fn emit_report(report: &EquivalenceReport, format: ReportFormat, path: &Path) -> Result<()> {
    let body = match format {
        ReportFormat::Csv => to_csv(report),
        ReportFormat::Json => to_json(report)?,
    };
    let write = || -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(body.as_bytes())?;
        f.flush()
    };
    write().map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Renders the report to a string without touching the filesystem.
pub fn render(report: &EquivalenceReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => Ok(to_csv(report)),
        ReportFormat::Json => to_json(report),
    }
}

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtNonneg;
use crate::record::{Status, VerificationRecord};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub verified: usize,
    pub violated: usize,
    pub report_only: usize,
    pub not_applicable: usize,
}

impl Summary {
    pub fn tally(records: &[VerificationRecord]) -> Summary {
        let mut s = Summary::default();
        for r in records {
            match r.status {
                Status::Verified => s.verified += 1,
                Status::Violated => s.violated += 1,
                Status::ReportOnly => s.report_only += 1,
                Status::NotApplicable => s.not_applicable += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub config_hash: String,
    pub summary: Summary,
    pub records: Vec<VerificationRecord>,
}

impl Report {
    pub fn new(config_hash: String, records: Vec<VerificationRecord>) -> Report {
        Report {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash,
            summary: Summary::tally(&records),
            records,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,module,lambda,lhs,bound,slack,status\n");
        for r in &self.records {
            let lambda = r.lambda.map(|l| l.to_string()).unwrap_or_default();
            let slack = if r.slack.is_nan() { String::new() } else { num(r.slack) };
            writeln!(out, "{},{},{},{},{},{},{}", r.id, r.module, lambda, ext(r.lhs), ext(r.bound), slack, r.status.as_str())
                .unwrap();
        }
        out
    }
}

fn num(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        x.to_string()
    }
}

fn ext(x: ExtNonneg) -> String {
    match x {
        ExtNonneg::Finite(v) => num(v),
        ExtNonneg::Infinite => "inf".into(),
    }
}

/// One row of plot data: a point of a dilation scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotRow {
    pub scan: String,
    pub lambda: f64,
    pub norm: f64,
}

pub fn plot_csv(rows: &[PlotRow]) -> String {
    let mut out = String::from("scan,lambda,norm,log_lambda,log_norm\n");
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.scan, num(r.lambda), num(r.norm), num(r.lambda.ln()), num(r.norm.ln())).unwrap();
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io { path: dir.to_path_buf(), source })
}

/// Writes `report.json`, `report.csv` and, when there is any, `plot_data.csv`.
pub fn emit(report: &Report, plot: &[PlotRow], dir: &Path, formats: &[String]) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let mut written = Vec::new();
    for fmt in formats {
        let (name, body) = match fmt.as_str() {
            "json" => ("report.json", report.to_json()),
            "csv" => ("report.csv", report.to_csv()),
            other => return Err(Error::Config(format!("unknown output format `{other}`"))),
        };
        let path = dir.join(name);
        write_file(&path, &body)?;
        written.push(path);
    }
    if !plot.is_empty() {
        let path = dir.join("plot_data.csv");
        write_file(&path, &plot_csv(plot))?;
        written.push(path);
    }
    Ok(written)
}

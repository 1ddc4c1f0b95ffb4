//! Report model and emitters. JSON carries a schema tag and sorted keys;
//! CSV mirrors the record table with RFC 4180 quoting, findings appended as
//! prefixed rows.

use std::io::Write;

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "kernel-mult-lab/1";

/// Residual placeholder when a fixture could not be built; forces the pass
/// flag off while staying JSON-representable.
pub const FAILED_RESIDUAL: f64 = f64::MAX;

/// One verification check aggregated over its instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub instances: usize,
    pub max_residual: f64,
    pub name: String,
    pub paper_anchor: String,
    pub pass: bool,
    pub tolerance: f64,
    pub wall_ms: f64,
}

/// Evidence-only probe output; never affects the exit code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub detail: String,
    pub name: String,
    pub samples: usize,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub findings: Vec<Finding>,
    pub records: Vec<CheckRecord>,
    pub schema: String,
    pub seed: u64,
    pub suite: String,
    pub trials: usize,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

pub fn emit_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

const CSV_HEADER: [&str; 7] =
    ["name", "paper_anchor", "instances", "max_residual", "tolerance", "pass", "wall_ms"];

/// Shortest representation that parses back to the same bits.
fn fmt_f64(x: f64) -> String {
    serde_json::to_string(&x).expect("finite float")
}

pub fn emit_csv(report: &Report) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("csv header");
    for r in &report.records {
        w.write_record([
            r.name.as_str(),
            r.paper_anchor.as_str(),
            &r.instances.to_string(),
            &fmt_f64(r.max_residual),
            &fmt_f64(r.tolerance),
            &r.pass.to_string(),
            &fmt_f64(r.wall_ms),
        ])
        .expect("csv row");
    }
    for f in &report.findings {
        w.write_record([
            &format!("finding:{}", f.name),
            f.detail.as_str(),
            &f.samples.to_string(),
            "0",
            "0",
            "true",
            &fmt_f64(f.wall_ms),
        ])
        .expect("csv finding row");
    }
    String::from_utf8(w.into_inner().expect("csv flush")).expect("csv is utf-8")
}

/// Parse record rows back out of an emitted CSV (findings rows excluded).
pub fn parse_csv_records(text: &str) -> Result<Vec<CheckRecord>, String> {
    let mut out = Vec::new();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    for row in rdr.records() {
        let row = row.map_err(|e| e.to_string())?;
        if row.len() != 7 {
            return Err(format!("expected 7 columns, got {}", row.len()));
        }
        if row[0].starts_with("finding:") {
            continue;
        }
        out.push(CheckRecord {
            name: row[0].to_string(),
            paper_anchor: row[1].to_string(),
            instances: row[2].parse().map_err(|e| format!("instances: {e}"))?,
            max_residual: row[3].parse().map_err(|e| format!("max_residual: {e}"))?,
            tolerance: row[4].parse().map_err(|e| format!("tolerance: {e}"))?,
            pass: row[5].parse().map_err(|e| format!("pass: {e}"))?,
            wall_ms: row[6].parse().map_err(|e| format!("wall_ms: {e}"))?,
        });
    }
    Ok(out)
}

pub fn write_report(report: &Report, format: &str, path: &str) -> Result<(), String> {
    let body = match format {
        "json" => emit_json(report),
        "csv" => emit_csv(report),
        other => return Err(format!("unknown format {other:?}")),
    };
    let mut file =
        std::fs::File::create(path).map_err(|e| format!("cannot write {path}: {e}"))?;
    file.write_all(body.as_bytes()).map_err(|e| format!("cannot write {path}: {e}"))
}

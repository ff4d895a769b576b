//! Raw timing persistence. CSV holds one row per repetition; JSON holds the
//! whole [`ResultSet`] including configuration and environment stamp.

use std::path::Path;

use ddm_core::TimingKind;
use serde::Deserialize;

use crate::error::{BenchError, Result};
use crate::experiment::{ResultSet, RunRow};

pub const CSV_HEADER: [&str; 9] = [
    "kind",
    "p",
    "n",
    "local_n",
    "workers",
    "rep",
    "seconds",
    "iterations",
    "residual",
];

/// Shortest text that parses back to the same bits; exponent form outside
/// `[1e-4, 1e15)`.
pub fn format_float(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub fn results_to_csv(rs: &ResultSet) -> String {
    let mut out = CSV_HEADER.join(",");
    out.push('\n');
    for r in &rs.runs {
        let fields = [
            r.kind.to_string(),
            r.p.to_string(),
            r.n.to_string(),
            r.local_n.to_string(),
            r.workers.to_string(),
            r.rep.to_string(),
            opt(r.seconds, format_float),
            opt(r.iterations, |i| i.to_string()),
            opt(r.residual, format_float),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn results_to_json(rs: &ResultSet) -> Result<String> {
    Ok(serde_json::to_string_pretty(rs)? + "\n")
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| BenchError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_results(rs: &ResultSet, path: &Path) -> Result<()> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => write(path, &results_to_json(rs)?),
        _ => write(path, &results_to_csv(rs)),
    }
}

#[derive(Deserialize)]
struct CsvRow {
    kind: String,
    p: usize,
    n: usize,
    local_n: usize,
    workers: usize,
    rep: usize,
    seconds: Option<f64>,
    iterations: Option<usize>,
    residual: Option<f64>,
}

/// Parses the CSV schema. Errors name the offending line.
pub fn results_from_csv(text: &str, path: &Path) -> Result<ResultSet> {
    let schema = |line: u64, message: String| BenchError::Schema {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| schema(1, e.to_string()))?
        .clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(schema(1, format!("expected header `{}`", CSV_HEADER.join(","))));
    }
    let mut runs = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            schema(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: CsvRow = record
            .deserialize(Some(&header))
            .map_err(|e| schema(line, e.to_string()))?;
        let kind: TimingKind = row.kind.parse().map_err(|e| schema(line, e))?;
        if row.p == 0 || row.n == 0 {
            return Err(schema(line, "p and n must be positive".into()));
        }
        if kind == TimingKind::Monolithic && row.p != 1 {
            return Err(schema(line, format!("monolithic row with p = {}", row.p)));
        }
        if let Some(s) = row.seconds {
            if !(s > 0.0 && s.is_finite()) {
                return Err(schema(line, format!("seconds must be positive, got {s}")));
            }
        }
        if runs
            .iter()
            .any(|r: &RunRow| r.kind == kind && r.p == row.p && r.rep == row.rep)
        {
            return Err(schema(line, format!("duplicate {kind} row for p = {}, rep {}", row.p, row.rep)));
        }
        runs.push(RunRow {
            kind,
            p: row.p,
            n: row.n,
            local_n: row.local_n,
            workers: row.workers,
            rep: row.rep,
            seconds: row.seconds,
            iterations: row.iterations,
            residual: row.residual,
        });
    }
    Ok(ResultSet::from_runs(runs))
}

/// Loads a `.json` result set, or anything else as CSV.
pub fn load_results(path: &Path) -> Result<ResultSet> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Ok(serde_json::from_str(&text)?),
        _ => results_from_csv(&text, path),
    }
}

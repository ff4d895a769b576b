//! Derived-metric reports and their table, CSV and JSON renderings.
//!
//! Rendering is deterministic: fixed column order and fixed decimals (times 2,
//! speedups 1, efficiencies 1 as a percentage, small ratios 4).

use std::fmt::Write as _;
use std::path::Path;

use ddm_core::{EfficiencyReport, ReportRow, TimingKind};

use crate::config::OutputFormat;
use crate::error::{BenchError, Result};
use crate::experiment::ResultSet;

/// Builds the report from the aggregated timings. The `p = 1` row uses the
/// monolithic time for every column, so all its ratios are 1.
pub fn derive_report(rs: &ResultSet) -> Result<EfficiencyReport> {
    let records = rs.records()?;
    let mono = records
        .iter()
        .find(|r| r.kind == TimingKind::Monolithic)
        .ok_or(BenchError::MissingMonolithic)?;
    if let Some(other) = records.iter().find(|r| r.n != mono.n) {
        return Err(BenchError::MixedSizes(mono.n, other.n));
    }
    let (n, t1) = (mono.n, mono.seconds);

    let mut first = ReportRow::from_times(1, n, t1, Some(t1), Some(t1))?;
    first.local_n = Some(n);
    first.workers = Some(1);
    let mut rows = vec![first];
    let mut notes = vec![
        format!(
            "T(1,n) is the sequential banded LU solve of all n = {n} unknowns; \
             every time is the minimum over {} repetition(s)",
            mono.repetitions
        ),
        "T(p,n) covers local factorization, the interface iteration and back-substitution; \
         grid construction and decomposition are excluded"
            .to_string(),
    ];

    let mut ps: Vec<usize> = records.iter().filter(|r| r.p > 1).map(|r| r.p).collect();
    ps.dedup();
    for p in ps {
        let find = |kind| records.iter().find(|r| r.p == p && r.kind == kind);
        let par = find(TimingKind::Parallel);
        let local = find(TimingKind::SingleLocal);
        let mut row = ReportRow::from_times(p, n, t1, par.map(|r| r.seconds), local.map(|r| r.seconds))?;
        row.local_n = local.map(|r| r.local_n);
        row.workers = par.map(|r| r.workers);
        if par.is_none() {
            notes.push(format!("p = {p}: no parallel timing, speedup columns unavailable"));
        }
        if local.is_none() {
            notes.push(format!("p = {p}: no single-local timing, DC columns unavailable"));
        }
        if let Some(par) = par {
            if par.workers < p {
                notes.push(format!(
                    "p = {p}: {p} subdomains ran on {} worker thread(s); speedups are quoted against p",
                    par.workers
                ));
            }
        }
        rows.push(row);
    }
    for (kind, p) in rs.failures() {
        notes.push(format!("p = {p}: {kind} run failed"));
    }
    Ok(EfficiencyReport { rows, notes })
}

fn time(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.2}"))
}

fn speed(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.1}"))
}

fn percent(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{:.1}%", 100.0 * v))
}

fn ratio(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |v| format!("{v:.4}"))
}

fn count(v: Option<usize>) -> String {
    v.map_or_else(|| "n/a".into(), |v| v.to_string())
}

type Column = (&'static str, fn(&ReportRow) -> String);

const SECTIONS: [(&str, &[Column]); 7] = [
    ("Execution time and speedup", &[
        ("p", |r| r.p.to_string()),
        ("w", |r| count(r.workers)),
        ("T(p,n)", |r| time(r.t_p)),
        ("S(p,n)", |r| speed(r.speedup)),
        ("S/p", |r| speed(r.speedup_over_p)),
        ("p/S", |r| ratio(r.p_over_speedup)),
    ]),
    ("Standard efficiency", &[
        ("p", |r| r.p.to_string()),
        ("S(p,n)", |r| speed(r.speedup)),
        ("E_S", |r| percent(r.standard_efficiency())),
    ]),
    ("Divide-and-conquer speedup goal", &[
        ("p", |r| r.p.to_string()),
        ("n/p", |r| count(r.local_n)),
        ("T_DC", |r| time(r.t_dc)),
        ("S_DC", |r| speed(r.s_dc)),
        ("p²", |r| format!("{:.0}", r.p_squared)),
        ("(p²-S_DC)/p²", |r| percent(r.p_squared_deviation)),
    ]),
    ("Divide-and-conquer efficiency", &[
        ("p", |r| r.p.to_string()),
        ("p²", |r| format!("{:.0}", r.p_squared)),
        ("T(p,n)", |r| time(r.t_p)),
        ("S(p,n)", |r| speed(r.speedup)),
        ("T_DC", |r| time(r.t_dc)),
        ("S_DC", |r| speed(r.s_dc)),
        ("E_DC", |r| percent(r.e_dc)),
        ("S/p²", |r| percent(r.speedup_over_p_squared)),
    ]),
    ("Divide-and-conquer goal per processor", &[
        ("p", |r| r.p.to_string()),
        ("S_DC/p", |r| speed(r.s_dc_over_p)),
        ("p/S_DC", |r| ratio(r.standard_dc_bound)),
    ]),
    ("Limits of software with S <= p", &[
        ("p", |r| r.p.to_string()),
        ("T(1,n)/p", |r| time(Some(r.standard_time_bound))),
        ("E_DC bound p/S_DC", |r| percent(r.standard_dc_bound)),
    ]),
    ("Measured E_DC against the S <= p bound", &[
        ("p", |r| r.p.to_string()),
        ("E_DC", |r| percent(r.e_dc)),
        ("p/S_DC", |r| percent(r.standard_dc_bound)),
    ]),
];

/// Plain-text tables with pipe separators, one section per metric group.
pub fn render_table(report: &EfficiencyReport) -> Result<String> {
    if report.is_empty() {
        return Err(BenchError::EmptyReport);
    }
    let mut out = String::new();
    for (title, columns) in SECTIONS {
        let cells: Vec<Vec<String>> = report
            .rows
            .iter()
            .map(|r| columns.iter().map(|(_, f)| f(r)).collect())
            .collect();
        let widths: Vec<usize> = columns
            .iter()
            .enumerate()
            .map(|(c, (h, _))| {
                cells
                    .iter()
                    .map(|row| row[c].chars().count())
                    .chain([h.chars().count()])
                    .max()
                    .unwrap()
            })
            .collect();
        let line = |items: Vec<String>| {
            items
                .iter()
                .zip(&widths)
                .map(|(s, &w)| format!("{s:>w$}"))
                .collect::<Vec<_>>()
                .join(" | ")
        };
        let _ = writeln!(out, "## {title}\n");
        let _ = writeln!(out, "{}", line(columns.iter().map(|(h, _)| h.to_string()).collect()));
        let _ = writeln!(
            out,
            "{}",
            widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("-|-")
        );
        for row in cells {
            let _ = writeln!(out, "{}", line(row));
        }
        out.push('\n');
    }
    if !report.notes.is_empty() {
        out.push_str("## Notes\n\n");
        for note in &report.notes {
            let _ = writeln!(out, "- {note}");
        }
    }
    Ok(out)
}

/// One CSV row per report row, all fields at full precision.
pub fn render_csv(report: &EfficiencyReport) -> Result<String> {
    if report.is_empty() {
        return Err(BenchError::EmptyReport);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &report.rows {
        w.serialize(row).map_err(|e| BenchError::Config(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn render_json(report: &EfficiencyReport) -> Result<String> {
    if report.is_empty() {
        return Err(BenchError::EmptyReport);
    }
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

pub fn render(report: &EfficiencyReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Table => render_table(report),
        OutputFormat::Csv => render_csv(report),
        OutputFormat::Json => render_json(report),
    }
}

/// Renders and writes the report; nothing is written for an empty report.
pub fn emit(report: &EfficiencyReport, format: OutputFormat, destination: &Path) -> Result<()> {
    let text = render(report, format)?;
    std::fs::write(destination, text).map_err(|source| BenchError::Write {
        path: destination.to_path_buf(),
        source,
    })
}

//! Result serialization: CSV and JSON renderings of sweep rows and
//! convergence traces.
//!
//! CSV is emitted manually so the byte stream is fully under our control:
//! a `#schema=1` comment line, a header row, then data rows. Floats use
//! Rust's shortest round-trip `Display`, which is platform-independent, so
//! identical results serialize to identical bytes.

use std::fmt::Write as _;
use std::path::Path;

use crate::experiment::ResultRow;
use crate::Result;

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(OutputFormat::Csv),
            "json" => Some(OutputFormat::Json),
            _ => None,
        }
    }
}

const RESULT_HEADER: &str = "scheme,swept_parameter,swept_value,mean_sum_rate,ci95_halfwidth,mean_served_fraction,feasibility_violation_rate,trials,seed_base";

/// Renders sweep rows as CSV.
pub fn result_rows_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from("#schema=1\n");
    out.push_str(RESULT_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.scheme,
            r.swept_parameter,
            r.swept_value,
            r.mean_sum_rate,
            r.ci95_halfwidth,
            r.mean_served_fraction,
            r.feasibility_violation_rate,
            r.trials,
            r.seed_base
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Renders sweep rows as pretty JSON.
pub fn result_rows_json(rows: &[ResultRow]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(rows)?;
    s.push('\n');
    Ok(s)
}

/// Renders an iteration trace (1-based iteration, sum rate) as CSV.
pub fn trace_csv(trace: &[f64]) -> String {
    let mut out = String::from("#schema=1\niteration,sum_rate\n");
    for (n, v) in trace.iter().enumerate() {
        writeln!(out, "{},{}", n + 1, v).expect("writing to a String cannot fail");
    }
    out
}

/// Renders an iteration trace as JSON.
pub fn trace_json(trace: &[f64]) -> Result<String> {
    #[derive(serde::Serialize)]
    struct TracePoint {
        iteration: usize,
        sum_rate: f64,
    }
    let points: Vec<TracePoint> = trace
        .iter()
        .enumerate()
        .map(|(n, &v)| TracePoint {
            iteration: n + 1,
            sum_rate: v,
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&points)?;
    s.push('\n');
    Ok(s)
}

/// Writes rendered output to `path`, or to stdout when `path` is `None`.
pub fn emit(content: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

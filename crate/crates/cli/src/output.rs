//! Deterministic CSV and JSON emission.
//!
//! Floats use the shortest representation that round-trips, so identical
//! inputs give identical bytes. Negative zero prints as `0`.

use std::fmt::Write as _;
use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use hypmetric_core::report::VerificationReport;
use hypmetric_core::witness::WitnessLimit;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn num(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else {
        format!("{x}")
    }
}

/// Joins already formatted fields into one CSV line.
pub fn row(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn report_csv(report: &VerificationReport) -> String {
    let mut out = String::from("suite,check,value,expected,tol,pass,provenance\n");
    for check in &report.checks {
        let provenance = serde_json::to_value(check.provenance)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let _ = write!(
            out,
            "{}",
            row(&[
                report.suite.clone(),
                check.name.clone(),
                num(check.value),
                num(check.expected),
                num(check.tol),
                check.pass.to_string(),
                provenance,
            ])
        );
    }
    out
}

/// `sample,functional_value`, where the sample is the real abscissa of the point.
pub fn witness_csv(limit: &WitnessLimit) -> String {
    let mut out = String::from("sample,functional_value\n");
    for (point, value) in limit.sample_points.iter().zip(&limit.functional_values) {
        out.push_str(&row(&[num(point[0]), num(*value)]));
    }
    out
}

pub fn emit(text: &str) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    stdout.write_all(text.as_bytes())?;
    stdout.flush()?;
    Ok(())
}

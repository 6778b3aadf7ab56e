//! Machine-readable result emission: one JSON shape and one line-diffable
//! CSV shape shared by every command.

use serde::{Deserialize, Serialize};

/// Run provenance attached to every report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Meta {
    pub seed: u64,
    pub version: String,
}

/// The single result schema every command emits.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub command: String,
    pub inputs: serde_json::Value,
    pub values: Vec<f64>,
    pub bound: f64,
    pub verdicts: Vec<bool>,
    pub meta: Meta,
    /// When set, the CSV form appends a `stage,,,false` terminator row
    /// marking the first infeasible stage. Not part of the JSON schema.
    #[serde(skip)]
    pub csv_terminator: bool,
}

impl Report {
    pub fn new(
        command: &str,
        inputs: serde_json::Value,
        values: Vec<f64>,
        bound: f64,
        verdicts: Vec<bool>,
        seed: u64,
    ) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            values,
            bound,
            verdicts,
            meta: Meta {
                seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            csv_terminator: false,
        }
    }
}

/// Format with 12 significant digits, trailing zeros trimmed.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).clamp(0, 17) as usize;
    let s = format!("{v:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Render a report; CSV rows are ordered by stage ascending with the fixed
/// header `stage,value,bound,violated`.
pub fn emit_report(report: &Report, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Csv => {
            let mut out = String::from("stage,value,bound,violated\n");
            for (i, (v, verdict)) in report.values.iter().zip(&report.verdicts).enumerate() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    i + 1,
                    format_sig(*v),
                    format_sig(report.bound),
                    verdict
                ));
            }
            if report.csv_terminator {
                out.push_str(&format!("{},,,false\n", report.values.len() + 1));
            }
            out
        }
    }
}

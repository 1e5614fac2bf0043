//! Errors with exit codes, provenance headers and output sinks.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

/// Exit code for inputs outside the documented domain.
pub const EXIT_VALIDATION: u8 = 2;
/// Exit code for numerical failures and failed verifications.
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<pvi_core::Error> for CliError {
    fn from(e: pvi_core::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("cannot write output: {e}"))
    }
}

/// Provenance record carried by every output.
pub fn provenance(command: &str, mu: Option<Complex64>, tolerances: Value, case: Value) -> Value {
    json!({
        "tool": "pvi",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "mu": mu.map(|m| json!([m.re, m.im])),
        "tolerances": tolerances,
        "case": case,
    })
}

/// Provenance as `# key: value` lines for CSV files.
pub fn csv_header(prov: &Value) -> Vec<String> {
    prov.as_object()
        .map(|m| m.iter().map(|(k, v)| format!("{k}: {v}")).collect())
        .unwrap_or_default()
}

/// Writes `text` to `out`, or to standard output.
pub fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

pub fn emit_json(out: Option<&Path>, value: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    text.push('\n');
    emit(out, &text)
}

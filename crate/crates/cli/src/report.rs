use std::fmt::Write as _;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::Value;

/// Common envelope for every command's output.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub inputs: Value,
    pub pass: bool,
    pub seed: u64,
    pub verdicts: Vec<Row>,
    pub residuals: Vec<f64>,
    pub details: Value,
    pub wall_time_ms: u128,
}

/// One line of the human-readable table.
#[derive(Debug, Serialize)]
pub struct Row {
    pub name: String,
    pub pass: bool,
    pub result: String,
}

impl Row {
    pub fn new(name: impl Into<String>, pass: bool, result: impl Into<String>) -> Self {
        Row { name: name.into(), pass, result: result.into() }
    }
}

impl RunReport {
    pub fn table(&self) -> String {
        let width = self.verdicts.iter().map(|r| r.name.len()).max().unwrap_or(0).max(4);
        let mut out = String::new();
        let _ = writeln!(out, "{} (seed {}, {} ms)", self.command, self.seed, self.wall_time_ms);
        for r in &self.verdicts {
            let mark = if r.pass { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "  {mark} {:<width$}  {}", r.name, r.result);
        }
        let _ = writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" });
        out
    }
}

/// Errors map to distinct exit codes: 2 for unreadable or malformed input,
/// 3 for well-formed input that asks for something inconsistent.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Inconsistent(String),
}

impl CliError {
    pub fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Inconsistent(_) => ExitCode::from(3),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Inconsistent(m) => write!(f, "inconsistent request: {m}"),
        }
    }
}

//! Library backing the `seedmin` binary: config resolution, dataset
//! ingestion, the synthetic graph generator, and the experiment commands.
//!
//! Everything the binary does is callable from here so tests can drive
//! commands in-process and compare their CSV output byte for byte.

use std::fmt;

pub mod commands;
pub mod config;
pub mod gen;
pub mod ingest;

/// Error classes mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration; all violations listed. Exit 2.
    Config(Vec<String>),
    /// Input files unreadable or unparseable. Exit 3.
    Parse(String),
    /// The requested guarantee is unattainable. Exit 4.
    Infeasible(String),
    /// Anything else. Exit 5.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Infeasible(_) => 4,
            CliError::Internal(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(violations) => {
                writeln!(f, "invalid configuration:")?;
                for v in violations {
                    writeln!(f, "  - {v}")?;
                }
                Ok(())
            }
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            CliError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Probabilities print with six decimals so output files diff cleanly.
pub(crate) fn fmt_prob(p: f64) -> String {
    format!("{p:.6}")
}

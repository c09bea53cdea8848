//! Configuration-driven experiments on the Gaussian MAC with feedback and
//! correlated sources. See `config` for the input format and `output` for
//! the CSV layouts.

pub mod config;
pub mod output;
mod run;

use std::path::PathBuf;

use macfcs_core::{OptimizerError, StrategyError};

pub use run::{execute, run, Options, Outcome, EXIT_INFEASIBLE, EXIT_INVALID, EXIT_OK};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}", describe_config(key, *line, message))]
    Config {
        /// Dotted key of the offending entry; empty when unknown.
        key: String,
        line: Option<usize>,
        message: String,
    },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: output::EmitError,
    },
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

fn describe_config(key: &str, line: Option<usize>, message: &str) -> String {
    let mut s = String::from("invalid config");
    if !key.is_empty() {
        s.push_str(&format!(" key `{key}`"));
    }
    if let Some(l) = line {
        s.push_str(&format!(" (line {l})"));
    }
    s.push_str(": ");
    s.push_str(message);
    s
}

//! File formats, run configuration and commands behind the `mppt` binary.

pub mod commands;
pub mod config;
pub mod formats;

use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("oracle check failed: {0}")]
    Oracle(String),
    #[error("training did not converge (final loss {final_loss:e}); model written to {model}")]
    NotConverged { final_loss: f64, model: PathBuf },
    #[error("simulation failed: {0}")]
    Simulation(mppt_core::SimError),
    #[error("{failed} of {total} benchmark runs failed; partial results in {summary}")]
    PartialBenchmark { failed: usize, total: usize, summary: PathBuf },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::NotConverged { .. } => 3,
            CliError::Simulation(_) => 4,
            CliError::PartialBenchmark { .. } => 5,
            CliError::Io { .. } | CliError::Format { .. } | CliError::Oracle(_) => 1,
        }
    }
}

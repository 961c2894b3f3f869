use std::path::PathBuf;

use sectorplan::{PlanError, WorldError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    World(#[from] WorldError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("{path}: malformed result file: {message}")]
    ResultFormat { path: PathBuf, message: String },
    #[error("result was produced for scenario {result} but the scenario digest is {scenario}")]
    DigestMismatch { result: String, scenario: String },
    #[error("re-running the recorded configuration did not reproduce the stored path")]
    NotReproduced,
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

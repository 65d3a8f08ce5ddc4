use std::path::PathBuf;

use swarmsteer_core::SteerError;
use thiserror::Error;

use crate::config::ConfigError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("simulation error: {0}")]
    Steer(#[from] SteerError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("no connected initial placement found in {0} attempts")]
    Placement(usize),
    #[error("{}: no data rows", .0.display())]
    EmptyCsv(PathBuf),
    #[error("{}: schema mismatch: {reason}", path.display())]
    Schema { path: PathBuf, reason: String },
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }
}

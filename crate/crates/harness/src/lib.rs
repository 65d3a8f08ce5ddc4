//! Monte Carlo harness for the broadcast steering models in
//! [`swarmsteer_core`]: configuration, parallel seeded runs, CSV output,
//! and SVG plots.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod plot;
pub mod stats;

pub use config::{ConfigError, ExperimentConfig, Settings, SystemKind};
pub use error::HarnessError;
pub use experiment::{run_experiment, ExperimentResult, SummaryRecord, TraceRow};

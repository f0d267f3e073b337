//! Experiment plumbing: convergence records and their CSV form, run
//! configuration, and merging of curve files.

mod compare;
mod config;
mod record;

use thiserror::Error;

use crate::game::GameError;
use crate::policy::PolicyError;
use crate::solvers::SolverError;

pub use compare::{merge_curves, NamedCurve};
pub use config::{parse_settings, ExperimentConfig, CONFIG_KEYS};
pub use record::{ConvergenceRecord, Curve, CSV_COLUMNS};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(String),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
}

impl From<csv::Error> for HarnessError {
    fn from(e: csv::Error) -> Self {
        HarnessError::Csv(e.to_string())
    }
}

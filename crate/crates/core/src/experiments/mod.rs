//! Configured rate studies: sweeps, reports and the property suite.

pub mod check;
pub mod config;
pub mod output;
pub mod sweep;

pub use config::{AlphaRule, EpsRule, ExperimentConfig, HRule};
pub use sweep::{fit_rate, run_sweep, solve_cell, FailedCell, MeanError, RateReport, RateRow};

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv failure: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Numerical(#[from] crate::Error),
}

impl ExperimentError {
    /// Process exit status: 1 for configuration or i/o problems, 2 for
    /// violated numerical hypotheses.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Numerical(_) => 2,
            _ => 1,
        }
    }
}

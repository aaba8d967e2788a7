//! Batch front-end shared by the `woo` binary and the tests.
//!
//! Exit codes: 0 success, 1 runtime failure or bound violation, 2 usage
//! error (bad flags, bad config, unparsable input files).

pub mod commands;
pub mod config;
pub mod pipeline;

pub use commands::{
    cmd_indicator, cmd_list_problems, cmd_reference, cmd_run, cmd_validate, ValidateOptions,
};
pub use config::ExperimentConfig;
pub use pipeline::{execute, RunReport};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) | CliError::Violation(_) => EXIT_FAILURE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

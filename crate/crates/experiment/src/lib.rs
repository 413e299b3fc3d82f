// SPDX-License-Identifier: Apache-2.0

//! Experiment harness around `aoidoi-core`: scenario files, bound and
//! simulation commands, utilization sweeps and the datasets behind the
//! figures, all emitted as CSV.

pub mod commands;
pub mod config;
pub mod figures;
pub mod rows;
pub mod simulate;

use thiserror::Error;

/// Settings shared by all subcommands.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub allow_vacuous: bool,
}

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SAMPLES: u64 = 10_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(#[from] aoidoi_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

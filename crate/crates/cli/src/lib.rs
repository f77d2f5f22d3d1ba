//! Scan engine behind the `decaykit` binary: parameter sweeps over
//! frequency, distance or cavity size, figure presets, CSV/JSON output.

pub mod output;
pub mod preset;
pub mod scan;
pub mod spec;

use thiserror::Error;

pub use preset::{run_preset, Preset, PresetOptions};
pub use scan::{run_scan, run_scans, Row, ScanTable};
pub use spec::{Axis, Format, MethodFlag, Model, Range, ScanSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] decaykit_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    /// Some point failed numerically and `--strict` was given.
    pub const NUMERICAL: i32 = 3;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Core(_) => exit::USAGE,
            _ => exit::FAILURE,
        }
    }
}

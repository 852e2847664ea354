//! Experiment runner for `hadamard-core`: runs schemes from JSON configs,
//! evaluates diagnostic checks and sweeps parameter grids.

pub mod check;
pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod sweep;

use std::path::PathBuf;

pub use check::{cmd_check, CheckBundle, CheckConfig, CheckSpec};
pub use config::ExperimentConfig;
pub use error::CliError;
pub use run::{cmd_run, execute, RunOutcome};
pub use sweep::{cmd_sweep, SweepConfig, SweepOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

/// Command-line settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct Overrides {
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub max_iters: Option<usize>,
}

impl Default for Overrides {
    fn default() -> Self {
        Overrides {
            out: PathBuf::from("."),
            seed: None,
            max_iters: None,
        }
    }
}

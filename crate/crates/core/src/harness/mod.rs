//! Experiment configuration, seeded parallel runs, scaling comparisons,
//! verification batteries and file output.

mod config;
mod emit;
mod run;
mod scaling;
mod verify;

pub use config::{Cadence, ExperimentConfig, RunMode, RunSection};
pub use emit::{
    emit, prepare_output_dir, result_json, summary_csv, to_json, trajectories_csv, write_atomic,
};
pub use run::{
    mean_and_stderr, renormalize, run, summarize, BreachEvent, ExperimentResult, SeedTrajectory,
    SummaryRow, WallClock, CODE_VERSION, SCAN_RENORMALIZE_FLOOR,
};
pub use scaling::{run_scaling, scaling_report, ScalingPair, ScalingReport, MIN_SCALING_SEEDS};
pub use verify::{
    fuzz_specs, fuzzed_state, random_weights, run_suite, simplex_fuzz, verify, CheckResult,
    FuzzOutcome, Suite, SuiteReport, SuiteStatus, VerifyOptions, VerifyReport,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("run failed: {0}")]
    Run(String),
    #[error("seed {}, round {}: {} breached the simplex: {}", .0.seed, .0.round, .0.algorithm, .0.detail)]
    Breach(BreachEvent),
    #[error("i/o error: {0}")]
    Io(String),
}

impl HarnessError {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::Run(_) | HarnessError::Breach(_) => 2,
            HarnessError::Io(_) => 3,
        }
    }
}

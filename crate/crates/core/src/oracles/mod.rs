//! Brute-force checks of per-step identities, step-size validity and
//! affinity of update rules.

mod affine;
mod moments;
mod perturbation;
mod validity;

pub use affine::{affine_probe, linear_grid, probe_algorithm, AffineReport};
pub use moments::{
    enumerate_step_expectation, ts_moment_check, MomentReport, MomentRule, TsMomentOutcome,
    IDENTITY_TOLERANCE,
};
pub use perturbation::{
    perturbation_closed_form, perturbation_fixed_point, perturbation_solve, PerturbationSolution,
    ASSUMPTION_BOUND, PERTURBATION_CONSTANT,
};
pub use validity::{min_prob_scan, ScanLosses, ScanPoint, ValidityScan, MAX_SCAN_HORIZON};

use thiserror::Error;

/// Enumeration oracles refuse anything bigger.
pub const MAX_ENUMERATED_ARMS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("enumeration supports at most {MAX_ENUMERATED_ARMS} arms, got {0}")]
    TooManyArms(usize),
    #[error("oracle domain: {0}")]
    Domain(String),
}

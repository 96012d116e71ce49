//! Minimum-probability scans for TS-Prod under random losses.

use crate::algorithm::BanditAlgorithm;
use crate::algorithms::{ts_schedule, TsProd, TsProdConfig};
use crate::rng::{streams, RngStream};
use crate::simplex::{sample_arm, BanditFeedback, SimplexDistribution};

use super::OracleError;

pub const MAX_SCAN_HORIZON: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanLosses {
    /// Played-arm loss uniform on `[0, 1]`.
    Uniform,
    /// All losses zero, so only the bias moves the weights.
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub round: u64,
    /// Smallest `min_i pi_{t,i}` across the trials still running at `round`.
    pub min_prob: f64,
    /// `C_t^2 eta_t^2`.
    pub floor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidityScan {
    pub num_arms: usize,
    pub offset: f64,
    pub horizon: u64,
    pub trials: u64,
    /// Earliest round whose update left the open simplex, over all trials.
    pub first_breach_round: Option<u64>,
    pub breached_trials: u64,
    pub min_prob_trace: Vec<ScanPoint>,
}

impl ValidityScan {
    /// Rounds at which the recorded minimum fell to or below the floor.
    pub fn floor_violations(&self) -> Vec<u64> {
        self.min_prob_trace
            .iter()
            .filter(|p| p.min_prob <= p.floor)
            .map(|p| p.round)
            .collect()
    }
}

/// Runs `trials` independent TS-Prod trajectories from the uniform start.
/// A trial stops at its first breach.
pub fn min_prob_scan(
    num_arms: usize,
    offset: f64,
    horizon: u64,
    trials: u64,
    losses: ScanLosses,
    seed: u64,
) -> Result<ValidityScan, OracleError> {
    if horizon == 0 || horizon > MAX_SCAN_HORIZON {
        return Err(OracleError::Domain(format!(
            "scan horizon must lie in [1, {MAX_SCAN_HORIZON}], got {horizon}"
        )));
    }
    if trials == 0 {
        return Err(OracleError::Domain("scan needs at least one trial".into()));
    }
    let mut trace: Vec<ScanPoint> = (1..=horizon)
        .map(|t| ScanPoint {
            round: t,
            min_prob: f64::INFINITY,
            floor: ts_schedule(t, offset).probability_floor(),
        })
        .collect();
    let mut first_breach: Option<u64> = None;
    let mut breached = 0;
    for trial in 0..trials {
        let mut alg = TsProd::new(num_arms, TsProdConfig::with_offset(offset))
            .map_err(|e| OracleError::Domain(e.to_string()))?;
        let mut rng = RngStream::new(seed.wrapping_add(trial), streams::FUZZ);
        for t in 1..=horizon {
            let pi = alg.weights().weights();
            let point = &mut trace[(t - 1) as usize];
            point.min_prob = point
                .min_prob
                .min(pi.iter().cloned().fold(f64::INFINITY, f64::min));
            let arm = sample_arm(pi, &mut rng);
            let loss = match losses {
                ScanLosses::Uniform => rng.next_uniform(),
                ScanLosses::Zero => 0.0,
            };
            let proposed = alg
                .propose(&BanditFeedback::new(t, arm, loss))
                .map_err(|e| OracleError::Domain(e.to_string()))?;
            match SimplexDistribution::new(proposed) {
                Ok(next) => alg.commit(next),
                Err(_) => {
                    breached += 1;
                    first_breach = Some(first_breach.map_or(t, |b| b.min(t)));
                    break;
                }
            }
        }
    }
    // rounds no trial reached stay out of the trace
    trace.retain(|p| p.min_prob.is_finite());
    Ok(ValidityScan {
        num_arms,
        offset,
        horizon,
        trials,
        first_breach_round: first_breach,
        breached_trials: breached,
        min_prob_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_offset_breaches_in_round_one() {
        let scan = min_prob_scan(2, 2.0, 100, 4, ScanLosses::Uniform, 1).unwrap();
        assert_eq!(scan.first_breach_round, Some(1));
        assert_eq!(scan.breached_trials, 4);
        assert_eq!(scan.min_prob_trace.len(), 1);
    }

    #[test]
    fn zero_losses_still_record_a_trace() {
        let scan = min_prob_scan(3, 1e5, 500, 1, ScanLosses::Zero, 0).unwrap();
        assert_eq!(scan.first_breach_round, None);
        assert_eq!(scan.min_prob_trace.len(), 500);
        assert!(scan.floor_violations().is_empty());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(min_prob_scan(2, 1e5, 0, 1, ScanLosses::Zero, 0).is_err());
        assert!(min_prob_scan(2, 1e5, 10, 0, ScanLosses::Zero, 0).is_err());
        assert!(min_prob_scan(2, 1e5, MAX_SCAN_HORIZON + 1, 1, ScanLosses::Zero, 0).is_err());
    }
}

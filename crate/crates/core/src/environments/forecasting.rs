//! Rain forecasting with self-interested experts.
//!
//! Each round every expert holds a belief `p` that it will rain, reports `r`,
//! and is charged the squared loss `(I - r)^2` once the outcome `I` is known.
//! Strategic experts pick the report that maximizes their expected weight
//! after the learner's next update.

use serde::{Deserialize, Serialize};

use super::EnvironmentError;
use crate::algorithm::BanditAlgorithm;
use crate::rng::{streams, RngStream};
use crate::simplex::{BanditFeedback, LossRange, LossVector};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "lowercase")]
pub enum ReportPolicy {
    Truthful,
    /// One-round greedy optimizer over reports `0, h, 2h, .., 1`.
    Strategic {
        grid: f64,
    },
}

/// Squared loss of report `report` when the outcome is `rain`.
pub fn squared_loss(rain: bool, report: f64) -> f64 {
    let outcome = if rain { 1.0 } else { 0.0 };
    (outcome - report).powi(2)
}

/// Candidate reports `0, h, .., 1` (the last one clamped to 1).
pub fn report_grid(resolution: f64) -> Vec<f64> {
    let steps = (1.0 / resolution).ceil() as usize;
    (0..=steps)
        .map(|j| (j as f64 * resolution).min(1.0))
        .collect()
}

/// Report that maximizes `E[pi_{t+1, expert}]` for an expert believing rain
/// has probability `belief`.
///
/// The expectation runs over the outcome and over the learner's arm draw. When
/// another arm is drawn the expert's report is never seen, so those branches
/// contribute the same amount for every candidate and only the branch where
/// `expert` is drawn is evaluated. Updates are applied to the learner's
/// proposal (a counterfactual); `learner` itself is not modified. Ties go to
/// the lowest report.
pub fn strategic_report<A: BanditAlgorithm + ?Sized>(
    learner: &A,
    expert: usize,
    belief: f64,
    resolution: f64,
) -> f64 {
    let round = learner.round();
    let selection = learner.distribution().weights()[expert];
    let next_weight = |loss: f64| -> f64 {
        learner
            .propose(&BanditFeedback::new(round, expert, loss))
            .map(|w| w[expert])
            .unwrap_or(f64::NEG_INFINITY)
    };
    let mut best = (f64::NEG_INFINITY, 0.0);
    for r in report_grid(resolution) {
        let value = selection
            * (belief * next_weight(squared_loss(true, r))
                + (1.0 - belief) * next_weight(squared_loss(false, r)));
        if value > best.0 {
            best = (value, r);
        }
    }
    best.1
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRound {
    pub beliefs: Vec<f64>,
    pub reports: Vec<f64>,
    pub rain: bool,
}

#[derive(Debug, Clone)]
pub struct ForecastingEnv {
    policies: Vec<ReportPolicy>,
    calibrated: usize,
    seed: u64,
    last: Option<ForecastRound>,
}

impl ForecastingEnv {
    pub fn new(
        policies: Vec<ReportPolicy>,
        calibrated: usize,
        seed: u64,
    ) -> Result<Self, EnvironmentError> {
        if policies.len() < 2 {
            return Err(EnvironmentError::Config("need at least two experts".into()));
        }
        if calibrated >= policies.len() {
            return Err(EnvironmentError::Config(format!(
                "calibrated expert {calibrated} out of range"
            )));
        }
        for p in &policies {
            if let ReportPolicy::Strategic { grid } = p {
                if !(*grid > 0.0 && *grid <= 0.5) {
                    return Err(EnvironmentError::Config(format!(
                        "report grid {grid} must lie in (0, 0.5]"
                    )));
                }
            }
        }
        Ok(Self {
            policies,
            calibrated,
            seed,
            last: None,
        })
    }

    pub fn num_experts(&self) -> usize {
        self.policies.len()
    }

    pub fn policies(&self) -> &[ReportPolicy] {
        &self.policies
    }

    /// Beliefs and outcome of round `t`; these depend on `(seed, t)` only.
    pub fn beliefs_and_outcome(&self, t: u64) -> (Vec<f64>, bool) {
        let k = self.policies.len() as u64;
        let mut belief_rng = RngStream::at_block(self.seed, streams::BELIEFS, t, 2 * k);
        let beliefs: Vec<f64> = (0..k).map(|_| belief_rng.next_uniform()).collect();
        let mut outcome_rng = RngStream::at_block(self.seed, streams::ENVIRONMENT, t, 2);
        let rain = outcome_rng.bernoulli(beliefs[self.calibrated]);
        (beliefs, rain)
    }

    pub fn next_losses<A: BanditAlgorithm + ?Sized>(
        &mut self,
        t: u64,
        learner: &A,
    ) -> Result<LossVector, EnvironmentError> {
        if learner.num_arms() != self.policies.len() {
            return Err(EnvironmentError::Config(format!(
                "learner has {} arms, environment has {} experts",
                learner.num_arms(),
                self.policies.len()
            )));
        }
        let (beliefs, rain) = self.beliefs_and_outcome(t);
        let reports: Vec<f64> = self
            .policies
            .iter()
            .enumerate()
            .map(|(i, policy)| match policy {
                ReportPolicy::Truthful => beliefs[i],
                ReportPolicy::Strategic { grid } => {
                    strategic_report(learner, i, beliefs[i], *grid).clamp(0.0, 1.0)
                }
            })
            .collect();
        let losses = reports.iter().map(|&r| squared_loss(rain, r)).collect();
        self.last = Some(ForecastRound {
            beliefs,
            reports,
            rain,
        });
        LossVector::new(losses, LossRange::Unit).map_err(|e| EnvironmentError::Input(e.to_string()))
    }

    pub fn last_round(&self) -> Option<&ForecastRound> {
        self.last.as_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{Exp3, LbProd};
    use crate::simplex::SimplexDistribution;

    #[test]
    fn grid_covers_unit_interval() {
        let g = report_grid(0.01);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 0.0);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert_eq!(
            report_grid(0.3),
            vec![0.0, 0.3, 0.6, 0.8999999999999999, 1.0]
        );
    }

    #[test]
    fn lb_prod_makes_truth_optimal() {
        let alg = LbProd::new(3, 0.3).unwrap();
        let r = strategic_report(&alg, 1, 0.7, 0.01);
        assert!((r - 0.7).abs() < 1e-12, "report {r}");
        assert_eq!(strategic_report(&alg, 1, 0.0, 0.01), 0.0);
    }

    #[test]
    fn exp3_invites_misreports() {
        // convex next-weight map: extreme reports beat the belief
        let pi = SimplexDistribution::new(vec![0.05, 0.95]).unwrap();
        let alg = Exp3::from_state(pi, 1, 0.5).unwrap();
        let r = strategic_report(&alg, 0, 0.6, 0.01);
        assert!((r - 0.6).abs() > 0.01, "report {r}");
    }

    #[test]
    fn losses_are_squared_errors_of_reports() {
        let mut env = ForecastingEnv::new(
            vec![
                ReportPolicy::Truthful,
                ReportPolicy::Strategic { grid: 0.01 },
            ],
            0,
            5,
        )
        .unwrap();
        let alg = LbProd::new(2, 0.2).unwrap();
        let losses = env.next_losses(1, &alg).unwrap();
        let round = env.last_round().unwrap().clone();
        for i in 0..2 {
            assert_eq!(losses.get(i), squared_loss(round.rain, round.reports[i]));
            assert!((0.0..=1.0).contains(&losses.get(i)));
        }
        assert!((round.reports[1] - round.beliefs[1]).abs() <= 0.01);
    }
}

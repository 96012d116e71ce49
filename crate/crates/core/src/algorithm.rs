//! The contract every learner implements.

use thiserror::Error;

use crate::simplex::{BanditFeedback, LossRange, SimplexDistribution, SimplexError};

/// Details of an update that would have left the simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct Breach {
    pub round: u64,
    pub weights_before: Vec<f64>,
    pub feedback: BanditFeedback,
    pub proposed: Vec<f64>,
    pub reason: SimplexError,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgorithmError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid feedback: {0}")]
    Feedback(String),
    #[error("round {}: update left the simplex ({})", .0.round, .0.reason)]
    InvariantViolation(Box<Breach>),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl AlgorithmError {
    pub fn breach(&self) -> Option<&Breach> {
        match self {
            AlgorithmError::InvariantViolation(b) => Some(b),
            _ => None,
        }
    }
}

/// A bandit learner over `K` experts.
///
/// `update` is a deterministic function of the state and the feedback. The
/// caller samples `A_t` from [`distribution`](Self::distribution) and owns all
/// randomness.
pub trait BanditAlgorithm {
    fn name(&self) -> &'static str;

    fn num_arms(&self) -> usize;

    /// The round about to be played, starting at 1.
    fn round(&self) -> u64;

    /// Distribution the arm for the current round is drawn from.
    fn distribution(&self) -> &SimplexDistribution;

    /// Internal weight vector the update acts on. Differs from
    /// [`distribution`](Self::distribution) only for mixture samplers.
    fn weights(&self) -> &SimplexDistribution {
        self.distribution()
    }

    fn loss_range(&self) -> LossRange {
        LossRange::Unit
    }

    /// Next internal weights for `feedback`, without validation against the
    /// simplex and without touching `self`.
    fn propose(&self, feedback: &BanditFeedback) -> Result<Vec<f64>, AlgorithmError>;

    /// Installs `next` as the internal weights and advances to the next round.
    fn commit(&mut self, next: SimplexDistribution);

    fn update(&mut self, feedback: &BanditFeedback) -> Result<(), AlgorithmError> {
        if feedback.round != self.round() {
            return Err(AlgorithmError::Feedback(format!(
                "feedback for round {} delivered in round {}",
                feedback.round,
                self.round()
            )));
        }
        let proposed = self.propose(feedback)?;
        let next = validate_proposal(self.weights(), self.round(), feedback, proposed)?;
        self.commit(next);
        Ok(())
    }
}

/// Checks arm index and loss range of `feedback`.
pub fn check_feedback(
    feedback: &BanditFeedback,
    num_arms: usize,
    range: LossRange,
) -> Result<(), AlgorithmError> {
    if feedback.arm >= num_arms {
        return Err(AlgorithmError::Feedback(format!(
            "arm {} out of range for {num_arms} arms",
            feedback.arm
        )));
    }
    if !feedback.loss.is_finite() || !range.contains(feedback.loss) {
        return Err(AlgorithmError::Feedback(format!(
            "loss {} outside {range:?}",
            feedback.loss
        )));
    }
    Ok(())
}

/// Turns raw proposed weights into a distribution, or a breach report.
pub fn validate_proposal(
    before: &SimplexDistribution,
    round: u64,
    feedback: &BanditFeedback,
    proposed: Vec<f64>,
) -> Result<SimplexDistribution, AlgorithmError> {
    SimplexDistribution::with_tolerance(proposed.clone(), before.tolerance()).map_err(|reason| {
        AlgorithmError::InvariantViolation(Box::new(Breach {
            round,
            weights_before: before.weights().to_vec(),
            feedback: *feedback,
            proposed,
            reason,
        }))
    })
}

//! Probability vectors over experts, loss vectors and bandit feedback.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::RngStream;

/// Default absolute tolerance on `|sum - 1|`.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("a distribution needs at least two experts, got {0}")]
    TooFewExperts(usize),
    #[error("weight {index} is {value}, expected a finite value in (0, 1)")]
    WeightOutOfRange { index: usize, value: f64 },
    #[error("weights sum to {sum}, off by more than {tolerance} from 1")]
    SumOffSimplex { sum: f64, tolerance: f64 },
}

/// A strictly positive probability vector over `K >= 2` experts.
///
/// Validation happens once, at construction. There is no renormalizing
/// constructor: updates that drift off the simplex are reported, not repaired.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimplexDistribution {
    weights: Vec<f64>,
    tolerance: f64,
}

impl SimplexDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self, SimplexError> {
        Self::with_tolerance(weights, SIMPLEX_TOLERANCE)
    }

    pub fn with_tolerance(weights: Vec<f64>, tolerance: f64) -> Result<Self, SimplexError> {
        if weights.len() < 2 {
            return Err(SimplexError::TooFewExperts(weights.len()));
        }
        for (index, &value) in weights.iter().enumerate() {
            if !(value.is_finite() && value > 0.0 && value < 1.0) {
                return Err(SimplexError::WeightOutOfRange { index, value });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tolerance {
            return Err(SimplexError::SumOffSimplex { sum, tolerance });
        }
        Ok(Self { weights, tolerance })
    }

    pub fn uniform(num_arms: usize) -> Result<Self, SimplexError> {
        Self::new(vec![1.0 / num_arms as f64; num_arms])
    }

    pub fn num_arms(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `<pi, losses>`.
    pub fn expected_loss(&self, losses: &[f64]) -> f64 {
        self.weights.iter().zip(losses).map(|(p, l)| p * l).sum()
    }

    pub fn sample(&self, rng: &mut RngStream) -> usize {
        sample_arm(&self.weights, rng)
    }

    pub fn into_weights(self) -> Vec<f64> {
        self.weights
    }
}

/// Draws an arm by inverting the cumulative distribution of `weights` with a
/// single uniform draw from `rng`.
pub fn sample_arm(weights: &[f64], rng: &mut RngStream) -> usize {
    let u = rng.next_uniform();
    arm_for_uniform(weights, u)
}

/// The arm selected by CDF inversion at `u` in `[0, 1)`.
///
/// Returns the smallest `i` with `u <= w_0 + .. + w_i`, so a draw that lands
/// exactly on a boundary goes to the lower index. Rounding slack at the top of
/// the CDF falls to the last arm.
pub fn arm_for_uniform(weights: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    for (i, w) in weights.iter().enumerate() {
        cumulative += w;
        if u <= cumulative {
            return i;
        }
    }
    weights.len() - 1
}

/// Declared range of a loss sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum LossRange {
    /// `[0, 1]`
    #[default]
    Unit,
    /// `[-1, 1]`, accepted by LB-Prod only.
    Signed,
}

impl LossRange {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            LossRange::Unit => (0.0, 1.0),
            LossRange::Signed => (-1.0, 1.0),
        }
    }

    pub fn contains(self, loss: f64) -> bool {
        let (lo, hi) = self.bounds();
        loss >= lo && loss <= hi
    }

    /// Whether every loss allowed by `self` is allowed by `other`.
    pub fn within(self, other: LossRange) -> bool {
        self == other || other == LossRange::Signed
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LossError {
    #[error("loss {value} for arm {arm} is outside the declared range {range:?}")]
    OutOfRange {
        arm: usize,
        value: f64,
        range: LossRange,
    },
    #[error("loss vector has {0} entries, need at least two")]
    TooShort(usize),
}

/// Full (hidden) loss vector of one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossVector {
    losses: Vec<f64>,
    range: LossRange,
}

impl LossVector {
    pub fn new(losses: Vec<f64>, range: LossRange) -> Result<Self, LossError> {
        if losses.len() < 2 {
            return Err(LossError::TooShort(losses.len()));
        }
        for (arm, &value) in losses.iter().enumerate() {
            if !range.contains(value) {
                return Err(LossError::OutOfRange { arm, value, range });
            }
        }
        Ok(Self { losses, range })
    }

    pub fn losses(&self) -> &[f64] {
        &self.losses
    }

    pub fn range(&self) -> LossRange {
        self.range
    }

    pub fn num_arms(&self) -> usize {
        self.losses.len()
    }

    pub fn get(&self, arm: usize) -> f64 {
        self.losses[arm]
    }
}

/// What the learner observes after round `round`: the arm it played and that
/// arm's loss.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BanditFeedback {
    pub round: u64,
    pub arm: usize,
    pub loss: f64,
}

impl BanditFeedback {
    pub fn new(round: u64, arm: usize, loss: f64) -> Self {
        Self { round, arm, loss }
    }

    pub fn from_losses(round: u64, arm: usize, losses: &LossVector) -> Self {
        Self::new(round, arm, losses.get(arm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_vectors() {
        assert!(matches!(
            SimplexDistribution::new(vec![1.0]),
            Err(SimplexError::TooFewExperts(1))
        ));
        assert!(matches!(
            SimplexDistribution::new(vec![1.0, 0.0]),
            Err(SimplexError::WeightOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            SimplexDistribution::new(vec![0.5, 0.6]),
            Err(SimplexError::SumOffSimplex { .. })
        ));
        assert!(SimplexDistribution::new(vec![0.5, 0.5 + 5e-10]).is_ok());
    }

    #[test]
    fn point_mass_always_selects_its_arm() {
        let mut rng = RngStream::new(7, 0);
        for _ in 0..1000 {
            assert_eq!(sample_arm(&[1.0, 0.0], &mut rng), 0);
        }
    }

    #[test]
    fn cdf_inversion_picks_the_bucket() {
        let w = [0.2, 0.3, 0.5];
        assert_eq!(arm_for_uniform(&w, 0.45), 1);
        assert_eq!(arm_for_uniform(&w, 0.0), 0);
        assert_eq!(arm_for_uniform(&w, 0.2), 0);
        assert_eq!(arm_for_uniform(&w, 0.5), 1);
        assert_eq!(arm_for_uniform(&w, 0.75), 2);
        assert_eq!(arm_for_uniform(&w, 0.999_999_999), 2);
    }

    #[test]
    fn fair_coin_frequency() {
        // 10^6 fair draws: sd of the frequency is 5e-4, so [0.498, 0.502] is a 4 sigma band.
        let dist = SimplexDistribution::uniform(2).unwrap();
        let mut rng = RngStream::new(42, 0);
        let n = 1_000_000;
        let zeros = (0..n).filter(|_| dist.sample(&mut rng) == 0).count();
        let freq = zeros as f64 / n as f64;
        assert!((0.498..=0.502).contains(&freq), "freq = {freq}");
    }

    #[test]
    fn loss_vector_checks_range() {
        assert!(LossVector::new(vec![-0.5, 0.2], LossRange::Unit).is_err());
        assert!(LossVector::new(vec![-0.5, 0.2], LossRange::Signed).is_ok());
        assert!(LossVector::new(vec![0.5], LossRange::Unit).is_err());
        assert!(LossRange::Unit.within(LossRange::Signed));
        assert!(!LossRange::Signed.within(LossRange::Unit));
    }
}

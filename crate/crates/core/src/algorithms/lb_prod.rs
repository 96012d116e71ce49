//! LB-Prod: Prod on the masked (not importance-weighted) loss with an
//! arm-dependent normalizer.

use crate::algorithm::{check_feedback, AlgorithmError, BanditAlgorithm};
use crate::simplex::{BanditFeedback, LossRange, SimplexDistribution};

/// `eta = sqrt(K ln T / (2T))`, valid when `T > K ln T / 2`.
pub fn lb_tuned_eta(num_arms: usize, horizon: u64) -> Result<f64, AlgorithmError> {
    let k = num_arms as f64;
    let t = horizon as f64;
    if horizon < 2 || t <= k * t.ln() / 2.0 {
        return Err(AlgorithmError::Config(format!(
            "tuned LB-Prod needs T > K ln(T) / 2; K = {num_arms}, T = {horizon} gives K ln(T) / 2 = {:.4}",
            k * t.ln() / 2.0
        )));
    }
    Ok((k * t.ln() / (2.0 * t)).sqrt())
}

#[derive(Debug, Clone)]
pub struct LbProd {
    pi: SimplexDistribution,
    eta: f64,
    round: u64,
}

impl LbProd {
    pub fn new(num_arms: usize, eta: f64) -> Result<Self, AlgorithmError> {
        let pi = SimplexDistribution::uniform(num_arms)
            .map_err(|e| AlgorithmError::Config(e.to_string()))?;
        Self::from_state(pi, 1, eta)
    }

    pub fn tuned(num_arms: usize, horizon: u64) -> Result<Self, AlgorithmError> {
        Self::new(num_arms, lb_tuned_eta(num_arms, horizon)?)
    }

    pub fn from_state(
        pi: SimplexDistribution,
        round: u64,
        eta: f64,
    ) -> Result<Self, AlgorithmError> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(AlgorithmError::Config(format!(
                "LB-Prod needs 0 < eta < 1, got {eta}"
            )));
        }
        Ok(Self {
            pi,
            eta,
            round: round.max(1),
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `masked_i - lambda_i` for every arm.
    pub fn increments(&self, arm: usize, loss: f64) -> Vec<f64> {
        let pi = self.pi.weights();
        let sum_sq: f64 = pi.iter().map(|p| p * p).sum();
        let scale = pi[arm] * loss / sum_sq;
        pi.iter()
            .enumerate()
            .map(|(i, &p)| {
                let masked = if i == arm { loss } else { 0.0 };
                masked - p * scale
            })
            .collect()
    }
}

impl BanditAlgorithm for LbProd {
    fn name(&self) -> &'static str {
        "lb-prod"
    }

    fn num_arms(&self) -> usize {
        self.pi.num_arms()
    }

    fn round(&self) -> u64 {
        self.round
    }

    fn distribution(&self) -> &SimplexDistribution {
        &self.pi
    }

    fn loss_range(&self) -> LossRange {
        LossRange::Signed
    }

    fn propose(&self, fb: &BanditFeedback) -> Result<Vec<f64>, AlgorithmError> {
        check_feedback(fb, self.num_arms(), self.loss_range())?;
        Ok(self
            .pi
            .weights()
            .iter()
            .zip(self.increments(fb.arm, fb.loss))
            .map(|(p, inc)| p * (1.0 - self.eta * inc))
            .collect())
    }

    fn commit(&mut self, next: SimplexDistribution) {
        self.pi = next;
        self.round += 1;
    }
}

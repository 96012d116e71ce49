//! TS-Prod: linearized 1/2-Tsallis FTRL with a single loss bias that both
//! corrects the second-order error and stabilizes the decreasing step size.
//!
//! The schedule is `eta_t = 1 / sqrt(c0 + 26 t)` with `eta_0 = 1 / sqrt(c0)`
//! and `C_t = 13/2 + (1/eta_t^2 - 1/(eta_t eta_{t-1}))`. With `c0 = K` the
//! first rounds can push a coordinate outside `(0, 1)`; a larger offset keeps
//! every round valid in practice. Breaches are reported, never repaired here.

use crate::algorithm::{check_feedback, AlgorithmError, BanditAlgorithm};
use crate::simplex::{BanditFeedback, SimplexDistribution};

/// Step size and bias coefficient for one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsSchedule {
    pub eta: f64,
    pub eta_prev: f64,
    pub bias_coefficient: f64,
}

impl TsSchedule {
    /// `C_t^2 eta_t^2`, the minimum-probability level that keeps the update
    /// well defined.
    pub fn probability_floor(&self) -> f64 {
        (self.bias_coefficient * self.eta).powi(2)
    }
}

/// Schedule for round `t >= 1` with offset `c0 >= 1`.
pub fn ts_schedule(t: u64, offset: f64) -> TsSchedule {
    let x = offset + 26.0 * t as f64;
    let x_prev = x - 26.0;
    // x - sqrt(x (x - 26)), rewritten to avoid cancellation for large x
    let gap = 26.0 * x / (x + (x * x_prev).sqrt());
    TsSchedule {
        eta: 1.0 / x.sqrt(),
        eta_prev: 1.0 / x_prev.sqrt(),
        bias_coefficient: 6.5 + gap,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsProdConfig {
    /// `c0` in `eta_t = 1 / sqrt(c0 + 26 t)`.
    pub schedule_offset: f64,
    /// When false the loss bias is dropped. Only useful in tests.
    pub bias: bool,
}

impl TsProdConfig {
    pub fn with_offset(schedule_offset: f64) -> Self {
        Self {
            schedule_offset,
            bias: true,
        }
    }

    /// `c0 = K`.
    pub fn default_for(num_arms: usize) -> Self {
        Self::with_offset(num_arms as f64)
    }

    pub fn without_bias(mut self) -> Self {
        self.bias = false;
        self
    }
}

#[derive(Debug, Clone)]
pub struct TsProd {
    pi: SimplexDistribution,
    round: u64,
    config: TsProdConfig,
}

impl TsProd {
    pub fn new(num_arms: usize, config: TsProdConfig) -> Result<Self, AlgorithmError> {
        let pi = SimplexDistribution::uniform(num_arms)
            .map_err(|e| AlgorithmError::Config(e.to_string()))?;
        Self::from_state(pi, 1, config)
    }

    pub fn from_state(
        pi: SimplexDistribution,
        round: u64,
        config: TsProdConfig,
    ) -> Result<Self, AlgorithmError> {
        if !(config.schedule_offset.is_finite() && config.schedule_offset >= 1.0) {
            return Err(AlgorithmError::Config(format!(
                "schedule offset must be >= 1, got {}",
                config.schedule_offset
            )));
        }
        Ok(Self {
            pi,
            round: round.max(1),
            config,
        })
    }

    pub fn config(&self) -> TsProdConfig {
        self.config
    }

    pub fn schedule(&self) -> TsSchedule {
        ts_schedule(self.round, self.config.schedule_offset)
    }

    /// Biased loss of the played arm.
    pub fn biased_loss(&self, arm: usize, loss: f64) -> f64 {
        if !self.config.bias {
            return loss;
        }
        let s = self.schedule();
        let p = self.pi.weights()[arm];
        loss - s.eta * (s.bias_coefficient - 6.5 * p) / p.sqrt()
    }
}

impl BanditAlgorithm for TsProd {
    fn name(&self) -> &'static str {
        "ts-prod"
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

    fn propose(&self, fb: &BanditFeedback) -> Result<Vec<f64>, AlgorithmError> {
        check_feedback(fb, self.num_arms(), self.loss_range())?;
        let eta = self.schedule().eta;
        let pi = self.pi.weights();
        let biased = self.biased_loss(fb.arm, fb.loss);
        let sum_three_halves: f64 = pi.iter().map(|p| p * p.sqrt()).sum();
        let scale = pi[fb.arm].sqrt() * biased / sum_three_halves;
        Ok(pi
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let masked = if i == fb.arm { biased } else { 0.0 };
                // pi (1 - 2 eta / sqrt(pi) (masked - lambda)), lambda = pi * scale
                p - 2.0 * eta * p.sqrt() * (masked - p * scale)
            })
            .collect())
    }

    fn commit(&mut self, next: SimplexDistribution) {
        self.pi = next;
        self.round += 1;
    }
}

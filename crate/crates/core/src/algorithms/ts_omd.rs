//! Dual-stabilized 1/2-Tsallis online mirror descent.
//!
//! Each round builds the implicit-exploration estimate
//! `l_i 1(A = i) / (pi_i + gamma_t)`, subtracts the stabilization bias
//! `(1 - xi_t) / (eta_{t+1} sqrt(pi_i))`, and takes the exact mirror step
//! `pi'_i = 1 / (1/sqrt(pi_i) + eta_{t+1} (est_i - mu))^2`
//! with the normalizer `mu` found by safeguarded Newton. The first-order (Prod)
//! version of the same step is exposed as [`TsOmdDs::linearized_step`].

use crate::algorithm::{check_feedback, validate_proposal, AlgorithmError, BanditAlgorithm};
use crate::simplex::{BanditFeedback, SimplexDistribution};

/// Bound on `eta sqrt(pi_i) |L_i|` under which the linearized and exact
/// steps are close.
pub const STEP_MAGNITUDE_BOUND: f64 = 0.25;

const NORMALIZER_TOLERANCE: f64 = 1e-12;
const NORMALIZER_MAX_ITERATIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TsOmdSchedule {
    /// `eta_t = 1/sqrt(t)`, `gamma_t = sqrt(K)/t`, `xi_t = eta_{t+1}/eta_t`.
    Anytime,
    /// Fixed step and exploration; `xi_t = 1`, so no stabilization bias.
    Constant { eta: f64, gamma: f64 },
}

/// Quantities of one step, before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct TsOmdStep {
    /// `eta_{t+1}`
    pub eta: f64,
    pub gamma: f64,
    pub xi: f64,
    /// Biased importance-weighted estimate per arm.
    pub estimate: Vec<f64>,
    /// Estimate centred so that `sum_i pi_i^{3/2} L_i = 0`.
    pub centred: Vec<f64>,
}

impl TsOmdStep {
    /// `max_i eta sqrt(pi_i) |L_i|`.
    pub fn magnitude(&self, pi: &[f64]) -> f64 {
        pi.iter()
            .zip(&self.centred)
            .map(|(p, l)| self.eta * p.sqrt() * l.abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct TsOmdDs {
    pi: SimplexDistribution,
    round: u64,
    schedule: TsOmdSchedule,
    magnitude_violations: u64,
    max_magnitude: f64,
}

impl TsOmdDs {
    pub fn new(num_arms: usize) -> Result<Self, AlgorithmError> {
        let pi = SimplexDistribution::uniform(num_arms)
            .map_err(|e| AlgorithmError::Config(e.to_string()))?;
        Self::from_state(pi, 1, TsOmdSchedule::Anytime)
    }

    pub fn from_state(
        pi: SimplexDistribution,
        round: u64,
        schedule: TsOmdSchedule,
    ) -> Result<Self, AlgorithmError> {
        if let TsOmdSchedule::Constant { eta, gamma } = schedule {
            if !(eta > 0.0 && eta.is_finite()) || !(gamma >= 0.0 && gamma.is_finite()) {
                return Err(AlgorithmError::Config(format!(
                    "constant schedule needs eta > 0 and gamma >= 0, got ({eta}, {gamma})"
                )));
            }
        }
        Ok(Self {
            pi,
            round: round.max(1),
            schedule,
            magnitude_violations: 0,
            max_magnitude: 0.0,
        })
    }

    /// Rounds whose step exceeded [`STEP_MAGNITUDE_BOUND`].
    pub fn magnitude_violations(&self) -> u64 {
        self.magnitude_violations
    }

    pub fn max_magnitude(&self) -> f64 {
        self.max_magnitude
    }

    /// `(eta_{t+1}, gamma_t, xi_t)` for the current round.
    pub fn rates(&self) -> (f64, f64, f64) {
        match self.schedule {
            TsOmdSchedule::Anytime => {
                let t = self.round as f64;
                let k = self.num_arms() as f64;
                let eta_next = 1.0 / (t + 1.0).sqrt();
                let xi = (t / (t + 1.0)).sqrt();
                (eta_next, k.sqrt() / t, xi)
            }
            TsOmdSchedule::Constant { eta, gamma } => (eta, gamma, 1.0),
        }
    }

    pub fn step(&self, arm: usize, loss: f64) -> TsOmdStep {
        let (eta, gamma, xi) = self.rates();
        let pi = self.pi.weights();
        let estimate: Vec<f64> = pi
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let iw = if i == arm { loss / (p + gamma) } else { 0.0 };
                iw - (1.0 - xi) / (eta * p.sqrt())
            })
            .collect();
        let sum_three_halves: f64 = pi.iter().map(|p| p * p.sqrt()).sum();
        let centre: f64 = pi
            .iter()
            .zip(&estimate)
            .map(|(p, e)| p * p.sqrt() * e)
            .sum::<f64>()
            / sum_three_halves;
        let centred = estimate.iter().map(|e| e - centre).collect();
        TsOmdStep {
            eta,
            gamma,
            xi,
            estimate,
            centred,
        }
    }

    /// `pi_i (1 - 2 eta sqrt(pi_i) L_i)`.
    pub fn linearized_step(&self, arm: usize, loss: f64) -> Vec<f64> {
        let step = self.step(arm, loss);
        self.pi
            .weights()
            .iter()
            .zip(&step.centred)
            .map(|(p, l)| p * (1.0 - 2.0 * step.eta * p.sqrt() * l))
            .collect()
    }

    /// Exact mirror step for `step`; returns the next weights and `mu`.
    pub fn exact_step(&self, step: &TsOmdStep) -> Result<(Vec<f64>, f64), AlgorithmError> {
        let pi = self.pi.weights();
        let inv_sqrt: Vec<f64> = pi.iter().map(|p| 1.0 / p.sqrt()).collect();
        let eta = step.eta;
        let k = pi.len() as f64;
        let weights_at = |mu: f64| -> Vec<f64> {
            inv_sqrt
                .iter()
                .zip(&step.centred)
                .map(|(s, l)| {
                    let d = s + eta * (l - mu);
                    1.0 / (d * d)
                })
                .collect()
        };
        // sum_i 1 / d_i^2 and its derivative in mu, sum_i 2 eta / d_i^3
        let sum_and_slope = |mu: f64| -> (f64, f64) {
            inv_sqrt
                .iter()
                .zip(&step.centred)
                .fold((0.0, 0.0), |(f, df), (s, l)| {
                    let r = 1.0 / (s + eta * (l - mu));
                    (f + r * r, df + 2.0 * eta * r * r * r)
                })
        };
        // every denominator >= sqrt(K) at `lo`, the smallest one equals 1 at `hi`
        let mut lo = f64::INFINITY;
        let mut hi = f64::INFINITY;
        for (s, l) in inv_sqrt.iter().zip(&step.centred) {
            lo = lo.min(l + (s - k.sqrt()) / eta);
            hi = hi.min(l + (s - 1.0) / eta);
        }
        // Newton on the increasing sum, falling back to bisection whenever a
        // step would leave the bracket
        let mut mu = lo;
        for _ in 0..NORMALIZER_MAX_ITERATIONS {
            let (total, slope) = sum_and_slope(mu);
            let excess = total - 1.0;
            if excess.abs() <= NORMALIZER_TOLERANCE {
                return Ok((weights_at(mu), mu));
            }
            if excess > 0.0 {
                hi = mu;
            } else {
                lo = mu;
            }
            let newton = mu - excess / slope;
            mu = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Err(AlgorithmError::Numerical(format!(
            "round {}: normalizer search did not reach 1e-12 in {NORMALIZER_MAX_ITERATIONS} iterations (bracket [{lo}, {hi}])",
            self.round
        )))
    }
}

impl BanditAlgorithm for TsOmdDs {
    fn name(&self) -> &'static str {
        "ts-omd-ds"
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
        let step = self.step(fb.arm, fb.loss);
        Ok(self.exact_step(&step)?.0)
    }

    fn commit(&mut self, next: SimplexDistribution) {
        self.pi = next;
        self.round += 1;
    }

    fn update(&mut self, fb: &BanditFeedback) -> Result<(), AlgorithmError> {
        if fb.round != self.round {
            return Err(AlgorithmError::Feedback(format!(
                "feedback for round {} delivered in round {}",
                fb.round, self.round
            )));
        }
        check_feedback(fb, self.num_arms(), self.loss_range())?;
        let step = self.step(fb.arm, fb.loss);
        let magnitude = step.magnitude(self.pi.weights());
        let (proposed, _) = self.exact_step(&step)?;
        let next = validate_proposal(&self.pi, self.round, fb, proposed)?;
        if magnitude > STEP_MAGNITUDE_BOUND {
            self.magnitude_violations += 1;
        }
        self.max_magnitude = self.max_magnitude.max(magnitude);
        self.commit(next);
        Ok(())
    }
}

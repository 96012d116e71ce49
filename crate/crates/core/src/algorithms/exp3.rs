//! Exp3 baseline: exponential weights on importance-weighted losses.
//!
//! Not a linear update rule, so strategic experts can profit from misreporting.

use crate::algorithm::{check_feedback, AlgorithmError, BanditAlgorithm};
use crate::simplex::{BanditFeedback, SimplexDistribution};

/// Smallest weight Exp3 keeps. Without it a dominated arm underflows and the
/// leader rounds to exactly 1.
pub const EXP3_WEIGHT_FLOOR: f64 = 1e-15;

/// `eta = sqrt(2 ln K / (K T))`.
pub fn exp3_tuned_eta(num_arms: usize, horizon: u64) -> f64 {
    let k = num_arms as f64;
    (2.0 * k.ln() / (k * horizon.max(1) as f64)).sqrt()
}

#[derive(Debug, Clone)]
pub struct Exp3 {
    pi: SimplexDistribution,
    eta: f64,
    round: u64,
}

impl Exp3 {
    pub fn new(num_arms: usize, eta: f64) -> Result<Self, AlgorithmError> {
        let pi = SimplexDistribution::uniform(num_arms)
            .map_err(|e| AlgorithmError::Config(e.to_string()))?;
        Self::from_state(pi, 1, eta)
    }

    pub fn tuned(num_arms: usize, horizon: u64) -> Result<Self, AlgorithmError> {
        Self::new(num_arms, exp3_tuned_eta(num_arms, horizon))
    }

    pub fn from_state(
        pi: SimplexDistribution,
        round: u64,
        eta: f64,
    ) -> Result<Self, AlgorithmError> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(AlgorithmError::Config(format!(
                "Exp3 needs eta > 0, got {eta}"
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
}

impl BanditAlgorithm for Exp3 {
    fn name(&self) -> &'static str {
        "exp3"
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
        let pi = self.pi.weights();
        let played = pi[fb.arm] * (-self.eta * fb.loss / pi[fb.arm]).exp();
        let total = pi.iter().sum::<f64>() - pi[fb.arm] + played;
        let floored: Vec<f64> = pi
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let w = if i == fb.arm {
                    played / total
                } else {
                    p / total
                };
                w.max(EXP3_WEIGHT_FLOOR)
            })
            .collect();
        let total: f64 = floored.iter().sum();
        Ok(floored.iter().map(|w| w / total).collect())
    }

    fn commit(&mut self, next: SimplexDistribution) {
        self.pi = next;
        self.round += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn step_by_hand() {
        let mut alg = Exp3::new(2, 0.1).unwrap();
        alg.update(&BanditFeedback::new(1, 0, 1.0)).unwrap();
        let e = (-0.2f64).exp();
        let w = alg.weights().weights();
        assert_abs_diff_eq!(w[0], e / (e + 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(w[0], 0.450_17, epsilon = 1e-5);
        assert_abs_diff_eq!(w[1], 0.549_83, epsilon = 1e-5);
    }

    #[test]
    fn zero_loss_is_a_fixed_point() {
        let pi = SimplexDistribution::new(vec![0.25, 0.75]).unwrap();
        let mut alg = Exp3::from_state(pi.clone(), 1, 0.3).unwrap();
        alg.update(&BanditFeedback::new(1, 0, 0.0)).unwrap();
        assert_eq!(alg.weights(), &pi);
    }

    #[test]
    fn dominated_arm_stays_representable() {
        let mut alg = Exp3::new(2, 2.0).unwrap();
        for t in 1..=200 {
            alg.update(&BanditFeedback::new(t, 1, 1.0)).unwrap();
        }
        let w = alg.weights().weights();
        assert!(w[0] < 1.0 && w[1] >= EXP3_WEIGHT_FLOOR * 0.99);
    }

    #[test]
    fn tuned_rate() {
        assert_abs_diff_eq!(
            exp3_tuned_eta(2, 10_000),
            (2f64.ln() / 10_000.0).sqrt(),
            epsilon = 1e-15
        );
    }
}

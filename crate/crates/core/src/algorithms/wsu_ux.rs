//! WSU-UX: Prod on importance-weighted losses with uniform exploration, and
//! its loss-biased variant.

use crate::algorithm::{check_feedback, AlgorithmError, BanditAlgorithm};
use crate::simplex::{BanditFeedback, SimplexDistribution};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WsuUxParams {
    pub eta: f64,
    pub gamma: f64,
    /// Apply the `l * (1 - eta / pi_tilde)` loss bias before importance weighting.
    pub biased: bool,
}

impl WsuUxParams {
    pub fn new(eta: f64, gamma: f64, biased: bool) -> Self {
        Self { eta, gamma, biased }
    }

    /// Biased variant with `eta = sqrt(ln K / (K T))` and `gamma = 2 K eta`.
    ///
    /// `gamma = 2 K eta` is the smallest mixture with `eta K / gamma <= 1/2`,
    /// and it also keeps the biased losses in `[0, l]`.
    pub fn tuned_biased(num_arms: usize, horizon: u64) -> Result<Self, AlgorithmError> {
        let k = num_arms as f64;
        let t = horizon.max(1) as f64;
        let eta = (k.ln() / (k * t)).sqrt();
        let params = Self::new(eta, 2.0 * k * eta, true);
        params.validate(num_arms)?;
        Ok(params)
    }

    /// Unbiased WSU-UX balanced for the `T^{2/3}` regime:
    /// `eta = (ln K)^{2/3} / (K^{1/3} T^{2/3})`, `gamma = (K ln K / T)^{1/3}`,
    /// so that `eta K / gamma = gamma`.
    pub fn tuned_cube_root(num_arms: usize, horizon: u64) -> Result<Self, AlgorithmError> {
        let k = num_arms as f64;
        let t = horizon.max(1) as f64;
        let eta = k.ln().powf(2.0 / 3.0) / (k.cbrt() * t.powf(2.0 / 3.0));
        let gamma = (k * k.ln() / t).cbrt();
        let params = Self::new(eta, gamma, false);
        params.validate(num_arms)?;
        Ok(params)
    }

    pub fn validate(&self, num_arms: usize) -> Result<(), AlgorithmError> {
        if num_arms < 2 {
            return Err(AlgorithmError::Config(format!(
                "need K >= 2, got {num_arms}"
            )));
        }
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return Err(AlgorithmError::Config(format!(
                "eta must be > 0, got {}",
                self.eta
            )));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(AlgorithmError::Config(format!(
                "gamma must lie in (0, 1), got {}",
                self.gamma
            )));
        }
        let ratio = self.eta * num_arms as f64 / self.gamma;
        if ratio > 0.5 {
            return Err(AlgorithmError::Config(format!(
                "eta K / gamma = {ratio} exceeds 1/2"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct WsuUx {
    pi: SimplexDistribution,
    pi_tilde: SimplexDistribution,
    params: WsuUxParams,
    round: u64,
}

impl WsuUx {
    pub fn new(num_arms: usize, params: WsuUxParams) -> Result<Self, AlgorithmError> {
        params.validate(num_arms)?;
        let pi = SimplexDistribution::uniform(num_arms)
            .map_err(|e| AlgorithmError::Config(e.to_string()))?;
        Self::from_state(pi, 1, params)
    }

    /// Resumes from internal weights `pi` at round `round`.
    pub fn from_state(
        pi: SimplexDistribution,
        round: u64,
        params: WsuUxParams,
    ) -> Result<Self, AlgorithmError> {
        params.validate(pi.num_arms())?;
        let pi_tilde = mixture(&pi, params.gamma)?;
        Ok(Self {
            pi,
            pi_tilde,
            params,
            round: round.max(1),
        })
    }

    pub fn params(&self) -> WsuUxParams {
        self.params
    }

    /// The loss that enters importance weighting for `arm`.
    pub fn loss_used(&self, arm: usize, loss: f64) -> f64 {
        if self.params.biased {
            loss * (1.0 - self.params.eta / self.pi_tilde.weights()[arm])
        } else {
            loss
        }
    }
}

fn mixture(pi: &SimplexDistribution, gamma: f64) -> Result<SimplexDistribution, AlgorithmError> {
    let k = pi.num_arms() as f64;
    let w = pi
        .weights()
        .iter()
        .map(|p| gamma / k + (1.0 - gamma) * p)
        .collect();
    SimplexDistribution::with_tolerance(w, pi.tolerance())
        .map_err(|e| AlgorithmError::Numerical(format!("exploration mixture: {e}")))
}

impl BanditAlgorithm for WsuUx {
    fn name(&self) -> &'static str {
        if self.params.biased {
            "bwsu"
        } else {
            "wsu-ux"
        }
    }

    fn num_arms(&self) -> usize {
        self.pi.num_arms()
    }

    fn round(&self) -> u64 {
        self.round
    }

    fn distribution(&self) -> &SimplexDistribution {
        &self.pi_tilde
    }

    fn weights(&self) -> &SimplexDistribution {
        &self.pi
    }

    fn propose(&self, fb: &BanditFeedback) -> Result<Vec<f64>, AlgorithmError> {
        check_feedback(fb, self.num_arms(), self.loss_range())?;
        let eta = self.params.eta;
        let pi = self.pi.weights();
        let estimate = self.loss_used(fb.arm, fb.loss) / self.pi_tilde.weights()[fb.arm];
        // only the played coordinate of the estimate is non-zero; dividing by
        // the actual mass keeps rounding drift in the sum from compounding
        let lambda = pi[fb.arm] * estimate / pi.iter().sum::<f64>();
        Ok(pi
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let est = if i == fb.arm { estimate } else { 0.0 };
                p * (1.0 - eta * (est - lambda))
            })
            .collect())
    }

    fn commit(&mut self, next: SimplexDistribution) {
        // mixing a valid distribution with the uniform one stays valid
        self.pi_tilde = mixture(&next, self.params.gamma).expect("mixture of a valid distribution");
        self.pi = next;
        self.round += 1;
    }
}

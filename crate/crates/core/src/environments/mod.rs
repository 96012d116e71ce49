//! Loss processes. Every environment is oblivious: round `t` losses are a
//! function of `(seed, t)` and the configuration, except for strategic
//! forecasters, whose reports also read the learner's current state.

mod forecasting;
mod matrix;

pub use forecasting::{
    report_grid, squared_loss, strategic_report, ForecastRound, ForecastingEnv, ReportPolicy,
};
pub use matrix::{load_loss_matrix, parse_loss_matrix};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algorithm::BanditAlgorithm;
use crate::rng::{streams, RngStream};
use crate::simplex::{LossRange, LossVector};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnvironmentError {
    #[error("environment config: {0}")]
    Config(String),
    #[error("environment input: {0}")]
    Input(String),
    #[error("environment io: {0}")]
    Io(String),
}

/// Independent Bernoulli losses with fixed means.
#[derive(Debug, Clone)]
pub struct StochasticBernoulliEnv {
    means: Vec<f64>,
    seed: u64,
}

impl StochasticBernoulliEnv {
    pub fn new(means: Vec<f64>, seed: u64) -> Result<Self, EnvironmentError> {
        if means.len() < 2 {
            return Err(EnvironmentError::Config("need at least two arms".into()));
        }
        if let Some(m) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
            return Err(EnvironmentError::Config(format!(
                "Bernoulli mean {m} outside [0, 1]"
            )));
        }
        Ok(Self { means, seed })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    /// Mean gaps to the best arm, or `None` if the minimizer is not unique.
    pub fn gaps(&self) -> Option<Vec<f64>> {
        let best = self.means.iter().cloned().fold(f64::INFINITY, f64::min);
        let ties = self.means.iter().filter(|&&m| m == best).count();
        (ties == 1).then(|| self.means.iter().map(|m| m - best).collect())
    }

    pub fn losses_at(&self, t: u64) -> LossVector {
        let k = self.means.len() as u64;
        let mut rng = RngStream::at_block(self.seed, streams::ENVIRONMENT, t, 2 * k);
        let losses = self
            .means
            .iter()
            .map(|&m| if rng.bernoulli(m) { 1.0 } else { 0.0 })
            .collect();
        LossVector::new(losses, LossRange::Unit).expect("Bernoulli losses are 0 or 1")
    }
}

/// Switching period, either absolute or as a share of the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Period {
    Rounds(u64),
    HorizonFraction(f64),
}

impl Period {
    pub fn resolve(self, horizon: u64) -> Result<u64, EnvironmentError> {
        let rounds = match self {
            Period::Rounds(n) => n,
            Period::HorizonFraction(f) => {
                if !(f > 0.0 && f <= 1.0) {
                    return Err(EnvironmentError::Config(format!(
                        "period fraction {f} must lie in (0, 1]"
                    )));
                }
                (f * horizon as f64).round() as u64
            }
        };
        if rounds == 0 {
            return Err(EnvironmentError::Config(
                "switching period must be positive".into(),
            ));
        }
        Ok(rounds)
    }
}

#[derive(Debug, Clone)]
pub enum Generator {
    /// Rows of a loss matrix, round `t` reads row `t - 1`.
    Fixed(Vec<Vec<f64>>),
    /// The best arm cycles `0, 1, .., K-1` every `period` rounds. The best arm
    /// has loss 0, every other arm loss 1.
    Switching { num_arms: usize, period: u64 },
    /// Independent uniform losses over the declared range.
    Uniform { num_arms: usize },
}

#[derive(Debug, Clone)]
pub struct AdversarialEnv {
    generator: Generator,
    range: LossRange,
    seed: u64,
}

impl AdversarialEnv {
    pub fn fixed(rows: Vec<Vec<f64>>, range: LossRange) -> Result<Self, EnvironmentError> {
        // run the rows back through the parser's checks
        let text: String = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|l| format!("{l:?}"))
                    .collect::<Vec<_>>()
                    .join(",")
                    + "\n"
            })
            .collect();
        let rows = parse_loss_matrix(&text, range)?;
        Ok(Self {
            generator: Generator::Fixed(rows),
            range,
            seed: 0,
        })
    }

    pub fn switching(num_arms: usize, period: u64) -> Result<Self, EnvironmentError> {
        if num_arms < 2 {
            return Err(EnvironmentError::Config("need at least two arms".into()));
        }
        if period == 0 {
            return Err(EnvironmentError::Config(
                "switching period must be positive".into(),
            ));
        }
        Ok(Self {
            generator: Generator::Switching { num_arms, period },
            range: LossRange::Unit,
            seed: 0,
        })
    }

    pub fn uniform(num_arms: usize, range: LossRange, seed: u64) -> Result<Self, EnvironmentError> {
        if num_arms < 2 {
            return Err(EnvironmentError::Config("need at least two arms".into()));
        }
        Ok(Self {
            generator: Generator::Uniform { num_arms },
            range,
            seed,
        })
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn range(&self) -> LossRange {
        self.range
    }

    pub fn num_arms(&self) -> usize {
        match &self.generator {
            Generator::Fixed(rows) => rows[0].len(),
            Generator::Switching { num_arms, .. } | Generator::Uniform { num_arms } => *num_arms,
        }
    }

    /// Rounds available, `None` when unbounded.
    pub fn capacity(&self) -> Option<u64> {
        match &self.generator {
            Generator::Fixed(rows) => Some(rows.len() as u64),
            _ => None,
        }
    }

    pub fn losses_at(&self, t: u64) -> Result<LossVector, EnvironmentError> {
        let losses = match &self.generator {
            Generator::Fixed(rows) => {
                rows.get((t as usize).wrapping_sub(1))
                    .cloned()
                    .ok_or_else(|| {
                        EnvironmentError::Input(format!(
                            "loss matrix exhausted: round {t} requested, {} rows available",
                            rows.len()
                        ))
                    })?
            }
            Generator::Switching { num_arms, period } => {
                let best = ((t.saturating_sub(1) / period) % *num_arms as u64) as usize;
                (0..*num_arms)
                    .map(|i| if i == best { 0.0 } else { 1.0 })
                    .collect()
            }
            Generator::Uniform { num_arms } => {
                let (lo, hi) = self.range.bounds();
                let mut rng =
                    RngStream::at_block(self.seed, streams::ENVIRONMENT, t, 2 * *num_arms as u64);
                (0..*num_arms).map(|_| rng.uniform_in(lo, hi)).collect()
            }
        };
        LossVector::new(losses, self.range).map_err(|e| EnvironmentError::Input(e.to_string()))
    }
}

/// Environment selection as written in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    Bernoulli {
        means: Vec<f64>,
    },
    /// Give exactly one of `period` (rounds) or `period_fraction` (of `T`).
    Switching {
        arms: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        period: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        period_fraction: Option<f64>,
    },
    Uniform {
        arms: usize,
        #[serde(default)]
        range: LossRange,
    },
    Matrix {
        path: PathBuf,
        #[serde(default)]
        range: LossRange,
    },
    /// `strategic` lists the experts that game their reports; everyone else
    /// is truthful. The outcome follows the calibrated expert's belief.
    Forecasting {
        experts: usize,
        #[serde(default)]
        calibrated_expert: usize,
        #[serde(default)]
        strategic: Vec<usize>,
        #[serde(default = "default_grid")]
        grid: f64,
    },
}

fn default_grid() -> f64 {
    0.01
}

impl EnvironmentSpec {
    pub fn id(&self) -> &'static str {
        match self {
            EnvironmentSpec::Bernoulli { .. } => "bernoulli",
            EnvironmentSpec::Switching { .. } => "switching",
            EnvironmentSpec::Uniform { .. } => "uniform",
            EnvironmentSpec::Matrix { .. } => "matrix",
            EnvironmentSpec::Forecasting { .. } => "forecasting",
        }
    }

    pub fn range(&self) -> LossRange {
        match self {
            EnvironmentSpec::Uniform { range, .. } | EnvironmentSpec::Matrix { range, .. } => {
                *range
            }
            _ => LossRange::Unit,
        }
    }

    /// Builds the environment for one seed. Matrix files are read here.
    pub fn build(&self, seed: u64, horizon: u64) -> Result<Environment, EnvironmentError> {
        Ok(match self {
            EnvironmentSpec::Bernoulli { means } => {
                Environment::Stochastic(StochasticBernoulliEnv::new(means.clone(), seed)?)
            }
            EnvironmentSpec::Switching {
                arms,
                period,
                period_fraction,
            } => {
                let period = match (period, period_fraction) {
                    (Some(p), None) => Period::Rounds(*p),
                    (None, Some(f)) => Period::HorizonFraction(*f),
                    _ => {
                        return Err(EnvironmentError::Config(
                            "switching needs exactly one of period, period_fraction".into(),
                        ))
                    }
                };
                Environment::Adversarial(AdversarialEnv::switching(
                    *arms,
                    period.resolve(horizon)?,
                )?)
            }
            EnvironmentSpec::Uniform { arms, range } => {
                Environment::Adversarial(AdversarialEnv::uniform(*arms, *range, seed)?)
            }
            EnvironmentSpec::Matrix { path, range } => {
                let rows = load_loss_matrix(path, *range)?;
                Environment::Adversarial(AdversarialEnv {
                    generator: Generator::Fixed(rows),
                    range: *range,
                    seed,
                })
            }
            EnvironmentSpec::Forecasting {
                experts,
                calibrated_expert,
                strategic,
                grid,
            } => {
                if let Some(bad) = strategic.iter().find(|&&i| i >= *experts) {
                    return Err(EnvironmentError::Config(format!(
                        "strategic expert {bad} out of range"
                    )));
                }
                let policies = (0..*experts)
                    .map(|i| {
                        if strategic.contains(&i) {
                            ReportPolicy::Strategic { grid: *grid }
                        } else {
                            ReportPolicy::Truthful
                        }
                    })
                    .collect();
                Environment::Forecasting(ForecastingEnv::new(policies, *calibrated_expert, seed)?)
            }
        })
    }
}

#[derive(Debug, Clone)]
pub enum Environment {
    Stochastic(StochasticBernoulliEnv),
    Adversarial(AdversarialEnv),
    Forecasting(ForecastingEnv),
}

impl Environment {
    pub fn num_arms(&self) -> usize {
        match self {
            Environment::Stochastic(e) => e.means().len(),
            Environment::Adversarial(e) => e.num_arms(),
            Environment::Forecasting(e) => e.num_experts(),
        }
    }

    pub fn range(&self) -> LossRange {
        match self {
            Environment::Adversarial(e) => e.range(),
            _ => LossRange::Unit,
        }
    }

    pub fn capacity(&self) -> Option<u64> {
        match self {
            Environment::Adversarial(e) => e.capacity(),
            _ => None,
        }
    }

    /// Full loss vector for round `t`. Only the forecasting game reads
    /// `learner`, and only to let strategic experts pick reports.
    pub fn next_losses<A: BanditAlgorithm + ?Sized>(
        &mut self,
        t: u64,
        learner: &A,
    ) -> Result<LossVector, EnvironmentError> {
        match self {
            Environment::Stochastic(e) => Ok(e.losses_at(t)),
            Environment::Adversarial(e) => e.losses_at(t),
            Environment::Forecasting(e) => e.next_losses(t, learner),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn bernoulli_zero_mean_arm_never_loses() {
        let env = StochasticBernoulliEnv::new(vec![0.0, 1.0], 3).unwrap();
        let n = 100_000;
        let mut ones = 0usize;
        for t in 1..=n {
            let l = env.losses_at(t);
            assert!(l.losses().iter().all(|&x| x == 0.0 || x == 1.0));
            assert_eq!(l.get(1), 1.0);
            ones += l.get(0) as usize;
        }
        assert_eq!(ones, 0);
    }

    #[test]
    fn bernoulli_frequency_within_three_sigma() {
        let env = StochasticBernoulliEnv::new(vec![0.3, 0.6], 11).unwrap();
        let n = 100_000u64;
        let hits: f64 = (1..=n).map(|t| env.losses_at(t).get(0)).sum();
        let sigma = (0.3f64 * 0.7 / n as f64).sqrt();
        assert!((hits / n as f64 - 0.3).abs() < 3.0 * sigma);
        assert_eq!(env.gaps(), Some(vec![0.0, 0.3]));
        assert_eq!(
            StochasticBernoulliEnv::new(vec![0.5, 0.5], 0)
                .unwrap()
                .gaps(),
            None
        );
    }

    #[test]
    fn switching_reverses_each_period() {
        let env = AdversarialEnv::switching(2, 100).unwrap();
        assert_eq!(env.losses_at(50).unwrap().losses(), &[0.0, 1.0]);
        assert_eq!(env.losses_at(100).unwrap().losses(), &[0.0, 1.0]);
        assert_eq!(env.losses_at(101).unwrap().losses(), &[1.0, 0.0]);
        assert_eq!(env.losses_at(150).unwrap().losses(), &[1.0, 0.0]);
        assert_eq!(env.losses_at(201).unwrap().losses(), &[0.0, 1.0]);
        assert_eq!(
            Period::HorizonFraction(1.0 / 3.0).resolve(3000).unwrap(),
            1000
        );
        assert!(Period::Rounds(0).resolve(10).is_err());
    }

    #[test]
    fn matrix_file_echoes_and_exhausts() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "# header comment\n0.2,0.8").unwrap();
        let spec = EnvironmentSpec::Matrix {
            path: file.path().to_path_buf(),
            range: LossRange::Unit,
        };
        let mut env = spec.build(0, 1).unwrap();
        let alg = crate::algorithms::Exp3::new(2, 0.1).unwrap();
        assert_eq!(env.next_losses(1, &alg).unwrap().losses(), &[0.2, 0.8]);
        assert!(matches!(
            env.next_losses(2, &alg),
            Err(EnvironmentError::Input(_))
        ));
        assert_eq!(env.capacity(), Some(1));
    }

    #[test]
    fn uniform_respects_range_and_seed() {
        let env = AdversarialEnv::uniform(3, LossRange::Signed, 9).unwrap();
        for t in 1..1000 {
            let l = env.losses_at(t).unwrap();
            assert!(l.losses().iter().all(|x| (-1.0..=1.0).contains(x)));
        }
        let again = AdversarialEnv::uniform(3, LossRange::Signed, 9).unwrap();
        assert_eq!(env.losses_at(77).unwrap(), again.losses_at(77).unwrap());
    }

    #[test]
    fn spec_parsing() {
        let spec: EnvironmentSpec =
            toml::from_str("id = \"switching\"\narms = 2\nperiod_fraction = 0.25").unwrap();
        assert_eq!(spec.build(0, 400).unwrap().num_arms(), 2);
        let both: EnvironmentSpec =
            toml::from_str("id = \"switching\"\narms = 2\nperiod = 4\nperiod_fraction = 0.25")
                .unwrap();
        assert!(both.build(0, 400).is_err());
        assert!(toml::from_str::<EnvironmentSpec>("id = \"bernoulli\"\nmeanz = [0.1]").is_err());
        let f: EnvironmentSpec =
            toml::from_str("id = \"forecasting\"\nexperts = 3\nstrategic = [1, 2]").unwrap();
        match f.build(1, 10).unwrap() {
            Environment::Forecasting(e) => {
                assert_eq!(e.policies()[0], ReportPolicy::Truthful);
                assert_eq!(e.policies()[2], ReportPolicy::Strategic { grid: 0.01 });
            }
            _ => panic!("wrong environment"),
        }
    }
}

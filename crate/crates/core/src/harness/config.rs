//! Experiment configuration files.
//!
//! ```toml
//! [algorithm]
//! id = "lb-prod"          # exp3 | wsu-ux | bwsu | lb-prod | ts-prod | ts-omd-ds
//!
//! [environment]
//! id = "switching"        # bernoulli | switching | uniform | matrix | forecasting
//! arms = 2
//! period_fraction = 0.75
//!
//! [run]
//! horizon = 10000
//! seeds = 20              # or seed_list = [3, 5, 8]
//! base_seed = 0
//! cadence = "geometric"   # or "every"
//! mode = "strict"         # or "scan"
//! threads = 0             # 0 picks the machine default
//! out = "out/lb-prod"
//! ```
//!
//! Unknown keys are rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::algorithm::BanditAlgorithm;
use crate::algorithms::AlgorithmSpec;
use crate::environments::EnvironmentSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cadence {
    /// Powers of two up to `T`, plus `T`.
    #[default]
    Geometric,
    Every,
}

impl Cadence {
    pub fn checkpoints(self, horizon: u64) -> Vec<u64> {
        match self {
            Cadence::Every => (1..=horizon).collect(),
            Cadence::Geometric => {
                let mut points: Vec<u64> = std::iter::successors(Some(1u64), |t| t.checked_mul(2))
                    .take_while(|&t| t <= horizon)
                    .collect();
                if horizon > 0 && points.last() != Some(&horizon) {
                    points.push(horizon);
                }
                points
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    /// Abort on the first simplex breach.
    #[default]
    Strict,
    /// Log breaches, renormalize and keep going.
    Scan,
}

impl std::str::FromStr for RunMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(RunMode::Strict),
            "scan" => Ok(RunMode::Scan),
            other => Err(format!("unknown mode {other:?}, expected strict or scan")),
        }
    }
}

fn default_seed_count() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub horizon: u64,
    #[serde(default = "default_seed_count")]
    pub seeds: u64,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_list: Option<Vec<u64>>,
    #[serde(default)]
    pub cadence: Cadence,
    #[serde(default)]
    pub mode: RunMode,
    #[serde(default)]
    pub threads: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunSection {
    pub fn new(horizon: u64, seeds: u64) -> Self {
        Self {
            horizon,
            seeds,
            base_seed: 0,
            seed_list: None,
            cadence: Cadence::Geometric,
            mode: RunMode::Strict,
            threads: 0,
            out: None,
        }
    }

    pub fn seed_values(&self) -> Vec<u64> {
        match &self.seed_list {
            Some(list) => list.clone(),
            None => (0..self.seeds)
                .map(|i| self.base_seed.wrapping_add(i))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: AlgorithmSpec,
    pub environment: EnvironmentSpec,
    pub run: RunSection,
}

impl ExperimentConfig {
    pub fn new(algorithm: AlgorithmSpec, environment: EnvironmentSpec, run: RunSection) -> Self {
        Self {
            algorithm,
            environment,
            run,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    /// Reads a config file. Relative matrix paths resolve against the file's
    /// directory.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text)?;
        if let EnvironmentSpec::Matrix { path: matrix, .. } = &mut config.environment {
            if matrix.is_relative() {
                if let Some(dir) = path.parent() {
                    *matrix = dir.join(&*matrix);
                }
            }
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Every precondition that can be checked without running: ids,
    /// step-size constraints for this `(K, T)`, loss-range compatibility,
    /// matrix length and seed list.
    pub fn validate(&self) -> Result<(), HarnessError> {
        let seeds = self.run.seed_values();
        if seeds.is_empty() {
            return Err(HarnessError::Config("no seeds to run".into()));
        }
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != seeds.len() {
            return Err(HarnessError::Config("seed list has duplicates".into()));
        }
        let env = self
            .environment
            .build(seeds[0], self.run.horizon)
            .map_err(|e| match e {
                crate::environments::EnvironmentError::Io(m) => HarnessError::Io(m),
                other => HarnessError::Config(other.to_string()),
            })?;
        let alg = self
            .algorithm
            .build(env.num_arms(), self.run.horizon)
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        if !env.range().within(alg.loss_range()) {
            return Err(HarnessError::Config(format!(
                "{} accepts {:?} losses but the environment emits {:?}",
                self.algorithm.id(),
                alg.loss_range(),
                env.range()
            )));
        }
        if let Some(rows) = env.capacity() {
            if rows < self.run.horizon {
                return Err(HarnessError::Config(format!(
                    "loss matrix has {rows} rows, horizon is {}",
                    self.run.horizon
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[algorithm]
id = "lb-prod"

[environment]
id = "switching"
arms = 2
period = 100

[run]
horizon = 1000
seeds = 3
base_seed = 10
"#;

    #[test]
    fn parses_and_validates() {
        let c = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(c.run.seed_values(), vec![10, 11, 12]);
        assert_eq!(c.run.cadence, Cadence::Geometric);
        assert_eq!(c.run.mode, RunMode::Strict);
        c.validate().unwrap();
        let again = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn unknown_keys_are_errors() {
        let typo = SAMPLE.replace("base_seed", "base_sead");
        assert!(ExperimentConfig::from_toml(&typo).is_err());
        let extra = format!("{SAMPLE}\n[plot]\nx = 1\n");
        assert!(ExperimentConfig::from_toml(&extra).is_err());
    }

    #[test]
    fn preconditions_checked_upfront() {
        let bad = SAMPLE.replace(
            "id = \"lb-prod\"",
            "id = \"wsu-ux\"\neta = 0.1\ngamma = 0.1",
        );
        let c = ExperimentConfig::from_toml(&bad).unwrap();
        assert!(matches!(c.validate(), Err(HarnessError::Config(_))));
        let short = SAMPLE
            .replace("horizon = 1000", "horizon = 2")
            .replace("arms = 2", "arms = 8");
        assert!(ExperimentConfig::from_toml(&short)
            .unwrap()
            .validate()
            .is_err());
        let signed = SAMPLE.replace(
            "id = \"switching\"\narms = 2\nperiod = 100",
            "id = \"uniform\"\narms = 2\nrange = \"signed\"",
        );
        assert!(ExperimentConfig::from_toml(&signed)
            .unwrap()
            .validate()
            .is_ok());
        let signed_exp3 = signed.replace("lb-prod", "exp3");
        assert!(ExperimentConfig::from_toml(&signed_exp3)
            .unwrap()
            .validate()
            .is_err());
    }

    #[test]
    fn geometric_checkpoints() {
        assert_eq!(Cadence::Geometric.checkpoints(0), Vec::<u64>::new());
        assert_eq!(Cadence::Geometric.checkpoints(1), vec![1]);
        assert_eq!(Cadence::Geometric.checkpoints(10), vec![1, 2, 4, 8, 10]);
        assert_eq!(Cadence::Geometric.checkpoints(16), vec![1, 2, 4, 8, 16]);
        assert_eq!(Cadence::Every.checkpoints(3), vec![1, 2, 3]);
    }
}

use serde::{Deserialize, Serialize};

use super::run::{run, ExperimentResult};
use super::{ExperimentConfig, HarnessError};

/// Fewer seeds than this make the ratios too noisy to read.
pub const MIN_SCALING_SEEDS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPair {
    pub from: u64,
    pub to: u64,
    /// `R(to) / R(from)` of the final mean pseudo-regret.
    pub ratio: f64,
    /// What a `sqrt(T)` rate predicts.
    pub sqrt_reference: f64,
    /// What a `log(T)` rate predicts.
    pub log_reference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub algorithm: String,
    pub horizons: Vec<u64>,
    pub mean_regret: Vec<f64>,
    pub stderr: Vec<f64>,
    pub pairs: Vec<ScalingPair>,
}

impl ScalingReport {
    pub fn ratios(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.ratio).collect()
    }
}

/// Ratios between consecutive horizons. The results must share algorithm
/// and environment configs and have at least [`MIN_SCALING_SEEDS`] seeds.
pub fn scaling_report(results: &[ExperimentResult]) -> Result<ScalingReport, HarnessError> {
    let first = results
        .first()
        .ok_or_else(|| HarnessError::Config("scaling needs at least one result".into()))?;
    for r in results {
        if r.config.algorithm != first.config.algorithm
            || r.config.environment != first.config.environment
        {
            return Err(HarnessError::Config(
                "scaling results must share the algorithm and environment".into(),
            ));
        }
        if r.seeds.len() < MIN_SCALING_SEEDS {
            return Err(HarnessError::Config(format!(
                "scaling needs at least {MIN_SCALING_SEEDS} seeds per horizon, got {}",
                r.seeds.len()
            )));
        }
    }
    let mut ordered: Vec<&ExperimentResult> = results.iter().collect();
    ordered.sort_by_key(|r| r.horizon);
    let pairs = ordered
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let (ta, tb) = (a.horizon as f64, b.horizon as f64);
            ScalingPair {
                from: a.horizon,
                to: b.horizon,
                ratio: b.final_mean() / a.final_mean(),
                sqrt_reference: (tb / ta).sqrt(),
                log_reference: tb.ln() / ta.ln(),
            }
        })
        .collect();
    Ok(ScalingReport {
        algorithm: first.algorithm.clone(),
        horizons: ordered.iter().map(|r| r.horizon).collect(),
        mean_regret: ordered.iter().map(|r| r.final_mean()).collect(),
        stderr: ordered.iter().map(|r| r.final_stderr()).collect(),
        pairs,
    })
}

/// Runs `config` once per horizon and compares the results.
pub fn run_scaling(
    config: &ExperimentConfig,
    horizons: &[u64],
) -> Result<(Vec<ExperimentResult>, ScalingReport), HarnessError> {
    let results = horizons
        .iter()
        .map(|&t| {
            let mut c = config.clone();
            c.run.horizon = t;
            run(&c)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let report = scaling_report(&results)?;
    Ok((results, report))
}

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, RunMode};
use super::HarnessError;
use crate::algorithm::{AlgorithmError, BanditAlgorithm};
use crate::environments::EnvironmentError;
use crate::regret::RegretLedger;
use crate::rng::{streams, RngStream};
use crate::simplex::{sample_arm, BanditFeedback, SimplexDistribution};

pub const CODE_VERSION: &str = concat!("ic-bandits ", env!("CARGO_PKG_VERSION"));

/// Floor applied to each coordinate when scan mode repairs a breach.
pub const SCAN_RENORMALIZE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreachEvent {
    pub seed: u64,
    pub algorithm: String,
    pub round: u64,
    pub detail: String,
    /// True when scan mode replaced the proposal and continued.
    pub renormalized: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedTrajectory {
    pub seed: u64,
    /// Pseudo-regret at each checkpoint.
    pub pseudo_regret: Vec<f64>,
    /// Realized regret at each checkpoint.
    pub realized_regret: Vec<f64>,
    /// True if scan mode had to repair at least one update.
    pub breached: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub t: u64,
    pub mean: f64,
    pub stderr: f64,
    pub n_seeds: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WallClock {
    pub per_seed_seconds: Vec<f64>,
    pub total_seconds: f64,
}

/// Everything a run produces. All serialized fields are a function of the
/// config and seeds; timings live in `wall_clock`, which is not serialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub code_version: String,
    pub config: ExperimentConfig,
    pub algorithm: String,
    pub num_arms: usize,
    pub horizon: u64,
    pub checkpoints: Vec<u64>,
    pub seeds: Vec<SeedTrajectory>,
    pub summary: Vec<SummaryRow>,
    pub breaches: Vec<BreachEvent>,
    #[serde(skip)]
    pub wall_clock: WallClock,
}

impl ExperimentResult {
    /// Mean pseudo-regret at the last checkpoint, 0 for an empty run.
    pub fn final_mean(&self) -> f64 {
        self.summary.last().map_or(0.0, |r| r.mean)
    }

    pub fn final_stderr(&self) -> f64 {
        self.summary.last().map_or(0.0, |r| r.stderr)
    }

    /// Final pseudo-regret of each seed, in seed order.
    pub fn final_regrets(&self) -> Vec<f64> {
        self.seeds
            .iter()
            .map(|s| s.pseudo_regret.last().copied().unwrap_or(0.0))
            .collect()
    }
}

/// Mean and standard error (sample standard deviation over `sqrt(n)`),
/// summed in the given order.
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

pub fn summarize(checkpoints: &[u64], seeds: &[SeedTrajectory]) -> Vec<SummaryRow> {
    checkpoints
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            let column: Vec<f64> = seeds.iter().map(|s| s.pseudo_regret[j]).collect();
            let (mean, stderr) = mean_and_stderr(&column);
            SummaryRow {
                t,
                mean,
                stderr,
                n_seeds: column.len(),
            }
        })
        .collect()
}

struct SeedOutcome {
    trajectory: SeedTrajectory,
    breaches: Vec<BreachEvent>,
    seconds: f64,
}

fn env_error(e: EnvironmentError) -> HarnessError {
    match e {
        EnvironmentError::Io(m) => HarnessError::Io(m),
        other => HarnessError::Run(other.to_string()),
    }
}

/// Rescales `proposed` onto the open simplex after flooring every coordinate.
pub fn renormalize(proposed: &[f64]) -> Option<SimplexDistribution> {
    let floored: Vec<f64> = proposed
        .iter()
        .map(|&p| {
            if p.is_finite() {
                p.max(SCAN_RENORMALIZE_FLOOR)
            } else {
                SCAN_RENORMALIZE_FLOOR
            }
        })
        .collect();
    let total: f64 = floored.iter().sum();
    SimplexDistribution::new(floored.iter().map(|p| p / total).collect()).ok()
}

fn run_seed(
    config: &ExperimentConfig,
    seed: u64,
    checkpoints: &[u64],
) -> Result<SeedOutcome, HarnessError> {
    let start = Instant::now();
    let horizon = config.run.horizon;
    let mut env = config.environment.build(seed, horizon).map_err(env_error)?;
    let mut alg = config
        .algorithm
        .build(env.num_arms(), horizon)
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let mut sampler = RngStream::new(seed, streams::SAMPLER);
    let mut ledger = RegretLedger::new(env.num_arms());
    let mut pseudo = Vec::with_capacity(checkpoints.len());
    let mut realized = Vec::with_capacity(checkpoints.len());
    let mut breaches = Vec::new();
    let mut next_checkpoint = checkpoints.iter().peekable();

    for t in 1..=horizon {
        let losses = env.next_losses(t, &alg).map_err(env_error)?;
        let play = alg.distribution().weights();
        let arm = sample_arm(play, &mut sampler);
        ledger
            .record(play, losses.losses(), arm)
            .map_err(|e| HarnessError::Run(e.to_string()))?;
        let feedback = BanditFeedback::from_losses(t, arm, &losses);
        match alg.update(&feedback) {
            Ok(()) => {}
            Err(AlgorithmError::InvariantViolation(breach)) => {
                let detail = format!("{} (proposed {:?})", breach.reason, breach.proposed);
                if config.run.mode == RunMode::Strict {
                    return Err(HarnessError::Breach(BreachEvent {
                        seed,
                        algorithm: alg.name().to_string(),
                        round: t,
                        detail,
                        renormalized: false,
                    }));
                }
                let repaired = renormalize(&breach.proposed).ok_or_else(|| {
                    HarnessError::Run(format!(
                        "seed {seed}, round {t}: cannot renormalize {detail}"
                    ))
                })?;
                alg.commit(repaired);
                breaches.push(BreachEvent {
                    seed,
                    algorithm: alg.name().to_string(),
                    round: t,
                    detail,
                    renormalized: true,
                });
            }
            Err(other) => {
                return Err(HarnessError::Run(format!(
                    "seed {seed}, round {t}: {other}"
                )))
            }
        }
        if next_checkpoint.peek() == Some(&&t) {
            next_checkpoint.next();
            pseudo.push(ledger.current_pseudo_regret());
            realized.push(ledger.current_realized_regret());
        }
    }
    Ok(SeedOutcome {
        trajectory: SeedTrajectory {
            seed,
            pseudo_regret: pseudo,
            realized_regret: realized,
            breached: !breaches.is_empty(),
        },
        breaches,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs every seed of `config`, one worker per seed, and merges results in
/// seed-list order.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    config.validate()?;
    let start = Instant::now();
    let seeds = config.run.seed_values();
    let checkpoints = config.run.cadence.checkpoints(config.run.horizon);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.run.threads)
        .build()
        .map_err(|e| HarnessError::Run(format!("thread pool: {e}")))?;
    let outcomes: Vec<Result<SeedOutcome, HarnessError>> = pool.install(|| {
        seeds
            .par_iter()
            .map(|&seed| run_seed(config, seed, &checkpoints))
            .collect()
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;

    let probe = config
        .environment
        .build(seeds[0], config.run.horizon)
        .map_err(env_error)?;
    let num_arms = probe.num_arms();
    let algorithm = config
        .algorithm
        .build(num_arms, config.run.horizon)
        .map_err(|e| HarnessError::Config(e.to_string()))?
        .name()
        .to_string();

    let mut trajectories = Vec::with_capacity(outcomes.len());
    let mut breaches = Vec::new();
    let mut per_seed_seconds = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        trajectories.push(o.trajectory);
        breaches.extend(o.breaches);
        per_seed_seconds.push(o.seconds);
    }
    let summary = summarize(&checkpoints, &trajectories);
    // where the output goes and how many workers produced it never change
    // results, so neither is part of the record
    let mut recorded = config.clone();
    recorded.run.threads = 0;
    recorded.run.out = None;
    Ok(ExperimentResult {
        code_version: CODE_VERSION.to_string(),
        config: recorded,
        algorithm,
        num_arms,
        horizon: config.run.horizon,
        checkpoints,
        seeds: trajectories,
        summary,
        breaches,
        wall_clock: WallClock {
            per_seed_seconds,
            total_seconds: start.elapsed().as_secs_f64(),
        },
    })
}

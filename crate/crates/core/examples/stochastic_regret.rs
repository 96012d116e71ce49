//! Pseudo-regret on a two-armed Bernoulli instance with means (0.1, 0.6).

use ic_bandits::algorithms::AlgorithmSpec;
use ic_bandits::environments::EnvironmentSpec;
use ic_bandits::harness::{run, ExperimentConfig, RunSection};

fn main() {
    let env = EnvironmentSpec::Bernoulli {
        means: vec![0.1, 0.6],
    };
    let algorithms = [
        AlgorithmSpec::Exp3 { eta: None },
        AlgorithmSpec::TsProd {
            schedule_offset: Some(1000.0),
        },
        AlgorithmSpec::TsOmdDs {},
    ];
    println!(
        "{:<10} {:>8} {:>12} {:>8}",
        "algorithm", "T", "mean", "stderr"
    );
    for alg in algorithms {
        for horizon in [10_000, 40_000] {
            let config =
                ExperimentConfig::new(alg.clone(), env.clone(), RunSection::new(horizon, 20));
            let r = run(&config).expect("valid config");
            println!(
                "{:<10} {:>8} {:>12.2} {:>8.2}",
                r.algorithm,
                horizon,
                r.final_mean(),
                r.final_stderr()
            );
        }
    }
}

//! Regret growth against a switching adversary at T, 4T and 16T.

use ic_bandits::algorithms::AlgorithmSpec;
use ic_bandits::environments::EnvironmentSpec;
use ic_bandits::harness::{run_scaling, ExperimentConfig, RunSection};

fn main() {
    let env = EnvironmentSpec::Switching {
        arms: 2,
        period: None,
        period_fraction: Some(0.75),
    };
    let horizons = [4000, 16_000, 64_000];
    for alg in [
        AlgorithmSpec::LbProd { eta: None },
        AlgorithmSpec::Bwsu {
            eta: None,
            gamma: None,
        },
        AlgorithmSpec::WsuUx {
            eta: None,
            gamma: None,
        },
    ] {
        let config = ExperimentConfig::new(alg, env.clone(), RunSection::new(horizons[0], 20));
        let (_, report) = run_scaling(&config, &horizons).expect("valid config");
        println!("{}", report.algorithm);
        for (t, m) in report.horizons.iter().zip(&report.mean_regret) {
            println!("  R({t}) = {m:.1}");
        }
        for p in &report.pairs {
            println!(
                "  R({})/R({}) = {:.3} (sqrt reference {:.1})",
                p.to, p.from, p.ratio, p.sqrt_reference
            );
        }
    }
}

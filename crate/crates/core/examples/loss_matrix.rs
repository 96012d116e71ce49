//! An explicit loss matrix as the adversary.

use ic_bandits::algorithms::AlgorithmSpec;
use ic_bandits::environments::EnvironmentSpec;
use ic_bandits::harness::{run, Cadence, ExperimentConfig, RunSection};

fn main() {
    let dir = std::env::temp_dir().join("icb-loss-matrix");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("losses.csv");
    // arm 1 is best early, arm 0 later; losses in [-1, 1] for LB-Prod
    let rows: String = (0..400)
        .map(|t| {
            if t < 300 {
                "0.5, -0.5\n"
            } else {
                "-1.0, 0.5\n"
            }
        })
        .collect();
    std::fs::write(&path, rows).unwrap();
    let mut section = RunSection::new(400, 5);
    section.cadence = Cadence::Every;
    let config = ExperimentConfig::new(
        AlgorithmSpec::LbProd { eta: Some(0.1) },
        EnvironmentSpec::Matrix {
            path,
            range: ic_bandits::simplex::LossRange::Signed,
        },
        section,
    );
    let result = run(&config).unwrap();
    for row in result.summary.iter().filter(|r| r.t % 50 == 0) {
        println!("t={:>4} mean pseudo-regret {:+.3}", row.t, row.mean);
    }
}

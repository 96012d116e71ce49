//! Loads a TOML experiment, runs it and writes the output files.
//!
//! cargo run --example run_from_config -- examples/configs/forecasting.toml /tmp/out

use std::path::PathBuf;

use ic_bandits::harness::{emit, run, ExperimentConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/matrix.toml")
    });
    let config =
        ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    print!("{}", config.to_toml());
    let result = run(&config).unwrap_or_else(|e| panic!("{e}"));
    for row in &result.summary {
        println!(
            "t={:>6} mean {:.4} stderr {:.4}",
            row.t, row.mean, row.stderr
        );
    }
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("icb-example"));
    for f in emit(&result, &out).unwrap_or_else(|e| panic!("{e}")) {
        println!("wrote {}", f.display());
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ic_bandits::harness::{
    emit, prepare_output_dir, run, run_scaling, to_json, write_atomic, ExperimentConfig,
    HarnessError, RunMode, Suite, SuiteStatus, VerifyOptions,
};

#[derive(Parser)]
#[command(
    name = "icb",
    version,
    about = "Incentive-compatible bandit experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Overrides {
    /// Number of seeds, starting at the base seed.
    #[arg(long)]
    seeds: Option<u64>,
    #[arg(long)]
    base_seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads, 0 for the machine default.
    #[arg(long)]
    threads: Option<usize>,
    /// strict or scan.
    #[arg(long)]
    mode: Option<RunMode>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write CSV and JSON output.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run oracle batteries.
    Verify {
        /// Comma-separated suites, or "all".
        #[arg(long, default_value = "all")]
        suite: String,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Random instances per battery.
        #[arg(long)]
        cases: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run one config at several horizons and report regret ratios.
    Scale {
        config: PathBuf,
        /// Comma-separated horizons.
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<u64>,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn load(path: &Path, o: &Overrides) -> Result<ExperimentConfig, HarnessError> {
    let mut config = ExperimentConfig::load(path)?;
    if let Some(n) = o.seeds {
        config.run.seeds = n;
        config.run.seed_list = None;
    }
    if let Some(s) = o.base_seed {
        config.run.base_seed = s;
        config.run.seed_list = None;
    }
    if let Some(out) = &o.out {
        config.run.out = Some(out.clone());
    }
    if let Some(t) = o.threads {
        config.run.threads = t;
    }
    if let Some(m) = o.mode {
        config.run.mode = m;
    }
    config.validate()?;
    if let Some(out) = &config.run.out {
        prepare_output_dir(out)?;
    }
    Ok(config)
}

fn run_command(path: &Path, overrides: &Overrides) -> Result<(), HarnessError> {
    let config = load(path, overrides)?;
    let result = run(&config)?;
    for s in &result.summary {
        if Some(&s.t) == result.checkpoints.last() {
            println!(
                "{} T={} seeds={} mean pseudo-regret {:.4} (stderr {:.4})",
                result.algorithm, s.t, s.n_seeds, s.mean, s.stderr
            );
        }
    }
    if !result.breaches.is_empty() {
        println!("{} breaches repaired in scan mode", result.breaches.len());
    }
    if let Some(out) = &config.run.out {
        for f in emit(&result, out)? {
            println!("wrote {}", f.display());
        }
    }
    Ok(())
}

fn scale_command(path: &Path, horizons: &[u64], overrides: &Overrides) -> Result<(), HarnessError> {
    let config = load(path, overrides)?;
    let (results, report) = run_scaling(&config, horizons)?;
    for (t, (m, s)) in report
        .horizons
        .iter()
        .zip(report.mean_regret.iter().zip(&report.stderr))
    {
        println!("T={t:>9} mean {m:.4} stderr {s:.4}");
    }
    for p in &report.pairs {
        println!(
            "R({})/R({}) = {:.4}   sqrt reference {:.4}   log reference {:.4}",
            p.to, p.from, p.ratio, p.sqrt_reference, p.log_reference
        );
    }
    if let Some(out) = &config.run.out {
        for r in &results {
            emit(r, &out.join(format!("T{}", r.horizon)))?;
        }
        write_atomic(&out.join("scaling.json"), to_json(&report)?.as_bytes())?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

fn verify_command(
    suite: &str,
    json: Option<&Path>,
    cases: Option<usize>,
    seed: u64,
) -> Result<bool, HarnessError> {
    let suites = Suite::parse_list(suite).map_err(HarnessError::Config)?;
    let mut opts = VerifyOptions {
        seed,
        ..VerifyOptions::default()
    };
    if let Some(c) = cases {
        opts.cases = c;
    }
    let report = ic_bandits::harness::verify(&suites, &opts);
    for s in &report.suites {
        let status = match s.status {
            SuiteStatus::Pass => "pass",
            SuiteStatus::DocumentedBreach => "pass (documented breach)",
            SuiteStatus::Fail => "FAIL",
        };
        println!("{:<14} {status}", s.suite.name());
        for c in &s.checks {
            println!(
                "  [{}] {}: {}",
                if c.passed { "ok" } else { "!!" },
                c.name,
                c.detail
            );
        }
    }
    if let Some(path) = json {
        write_atomic(path, to_json(&report)?.as_bytes())?;
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Run { config, overrides } => run_command(config, overrides).map(|()| true),
        Command::Scale {
            config,
            horizons,
            overrides,
        } => scale_command(config, horizons, overrides).map(|()| true),
        Command::Verify {
            suite,
            json,
            cases,
            seed,
        } => verify_command(suite, json.as_deref(), *cases, *seed),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("icb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! All oracle batteries at reduced sizes, as `icb verify` runs them.

use ic_bandits::harness::{verify, Suite, SuiteStatus, VerifyOptions};

fn main() {
    let opts = VerifyOptions {
        cases: 500,
        fuzz_steps: 2000,
        fuzz_seeds: 2,
        ..VerifyOptions::default()
    };
    let report = verify(&Suite::ALL, &opts);
    for s in &report.suites {
        let status = match s.status {
            SuiteStatus::Pass => "pass",
            SuiteStatus::DocumentedBreach => "pass (documented breach)",
            SuiteStatus::Fail => "FAIL",
        };
        println!("{}: {status}", s.suite.name());
        for c in &s.checks {
            println!("  {}: {}", c.name, c.detail);
        }
    }
    println!("all passed: {}", report.passed);
}

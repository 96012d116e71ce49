//! Minimum TS-Prod probability against the `C_t^2 eta_t^2` floor for a few
//! schedule offsets.

use ic_bandits::oracles::{min_prob_scan, ScanLosses};

fn main() {
    for offset in [2.0, 30.0, 1000.0, 1e5] {
        let scan = min_prob_scan(2, offset, 10_000, 20, ScanLosses::Uniform, 0).unwrap();
        println!(
            "c0 = {offset:>7}: first breach {:?}, {} of 20 trials breached, {} rounds at or below the floor",
            scan.first_breach_round,
            scan.breached_trials,
            scan.floor_violations().len()
        );
    }
}

//! Exact first and second moments of the LB-Prod and TS-Prod increments.

use ic_bandits::oracles::{
    enumerate_step_expectation, ts_moment_check, MomentRule, TsMomentOutcome,
};

fn main() {
    let pi = [0.5, 0.3, 0.2];
    let losses = [0.1, 0.2, 0.5];
    let lb = enumerate_step_expectation(MomentRule::LbProd, &pi, &losses).unwrap();
    println!("lb-prod, c_t = {:.6}", lb.centre);
    for i in 0..pi.len() {
        println!(
            "  arm {i}: E = {:+.6} (closed form {:+.6}), E[sq] = {:.6} <= {:.6}",
            lb.first_moment[i], lb.closed_form[i], lb.second_moment[i], lb.second_moment_bound[i]
        );
    }
    for (t, offset) in [(1, 3.0), (100, 1e6)] {
        match ts_moment_check(&pi, &losses, t, offset).unwrap() {
            TsMomentOutcome::HypothesisUnmet { floor, min_prob } => {
                println!("ts-prod t={t} c0={offset}: min pi {min_prob} <= C^2 eta^2 = {floor:.3}, not checked")
            }
            TsMomentOutcome::Checked(r) => println!(
                "ts-prod t={t} c0={offset}: residual {:.1e}, bound violations {:?}",
                r.max_residual(),
                r.bound_violations()
            ),
        }
    }
}

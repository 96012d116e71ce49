//! Next-round weights as a function of the played arm's loss. LB-Prod is
//! exactly affine; Exp3 is exponential.

use ic_bandits::algorithms::{Exp3, LbProd};
use ic_bandits::oracles::{linear_grid, probe_algorithm};
use ic_bandits::simplex::SimplexDistribution;

fn main() {
    let pi = SimplexDistribution::new(vec![0.2, 0.5, 0.3]).unwrap();
    let grid = linear_grid(0.0, 1.0, 11);
    let lb = LbProd::from_state(pi.clone(), 1, 0.3).unwrap();
    let exp3 = Exp3::from_state(pi, 1, 1.0).unwrap();
    for (name, reports) in [
        ("lb-prod", probe_algorithm(&lb, 0, &grid).unwrap()),
        ("exp3", probe_algorithm(&exp3, 0, &grid).unwrap()),
    ] {
        println!("{name}, arm 0 played");
        for r in reports {
            println!(
                "  arm {}: slope {:+.5} intercept {:.5} max residual {:.2e}",
                r.arm, r.slope, r.intercept, r.max_residual
            );
        }
    }
}

//! The perturbation `eps` that turns the linearized step into the exact one,
//! against `|eta sqrt(pi) L|`.

use ic_bandits::oracles::{perturbation_solve, PERTURBATION_CONSTANT};

fn main() {
    let (eta, pi) = (0.5, 0.25);
    println!("eta = {eta}, pi = {pi}, c = {PERTURBATION_CONSTANT}");
    for centred in [-0.9, -0.5, -0.1, 0.0, 0.1, 0.5, 0.9] {
        let s = perturbation_solve(eta, pi, centred).unwrap();
        let a = eta * f64::sqrt(pi) * f64::abs(centred);
        println!(
            "  L = {centred:+.1}: eps = {:.6} (closed form {:.6}), residual {:.1e}, eps / |a L| = {}",
            s.epsilon,
            s.closed_form,
            s.residual,
            if a > 0.0 { format!("{:.4}", s.epsilon / a) } else { "-".into() }
        );
    }
}

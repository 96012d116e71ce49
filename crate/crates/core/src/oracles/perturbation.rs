//! The perturbation `eps` that makes the exact 1/2-Tsallis step agree with
//! its linearization:
//!
//! `1 / (1 + a (L + eps))^2 = 1 - 2 a L`, with `a = eta sqrt(pi)`.
//!
//! Solved three ways (bisection, closed form, fixed point) so they can check
//! one another.

use super::OracleError;

/// Largest admissible `|a L|`.
pub const ASSUMPTION_BOUND: f64 = 0.25;

/// Frozen constant for `|eps| <= c |a L| max(|L|, 1)`: twice the largest ratio
/// observed on a dense grid of `|a L| <= 1/4`, which is about 2.627 at
/// `a L = 1/4`.
pub const PERTURBATION_CONSTANT: f64 = 5.255;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationSolution {
    pub epsilon: f64,
    /// `|1 / (1 + a (L + eps))^2 - (1 - 2 a L)|` at the bisection root.
    pub residual: f64,
    pub closed_form: f64,
}

fn defining_gap(a: f64, centred: f64, eps: f64) -> f64 {
    1.0 / (1.0 + a * (centred + eps)).powi(2) - (1.0 - 2.0 * a * centred)
}

fn check_domain(eta: f64, pi: f64, centred: f64) -> Result<f64, OracleError> {
    if !(eta > 0.0 && pi > 0.0 && pi <= 1.0 && centred.is_finite()) {
        return Err(OracleError::Domain(format!(
            "need eta > 0, pi in (0, 1] and finite L; got eta = {eta}, pi = {pi}, L = {centred}"
        )));
    }
    let a = eta * pi.sqrt();
    if (a * centred).abs() > ASSUMPTION_BOUND {
        return Err(OracleError::Domain(format!(
            "|eta sqrt(pi) L| = {} exceeds {ASSUMPTION_BOUND}",
            (a * centred).abs()
        )));
    }
    Ok(a)
}

/// `(1 / sqrt(1 - 2 a L) - 1) / a - L`.
pub fn perturbation_closed_form(eta: f64, pi: f64, centred: f64) -> Result<f64, OracleError> {
    let a = check_domain(eta, pi, centred)?;
    Ok((1.0 / (1.0 - 2.0 * a * centred).sqrt() - 1.0) / a - centred)
}

/// Iterates `eps <- (3 a l^2 + 2 a^2 l^3) / (2 (1 + a l)^2)`, `l = L + eps`.
pub fn perturbation_fixed_point(eta: f64, pi: f64, centred: f64) -> Result<f64, OracleError> {
    let a = check_domain(eta, pi, centred)?;
    let mut eps = 0.0f64;
    let mut last_step = f64::INFINITY;
    for _ in 0..1_000_000 {
        let l = centred + eps;
        let next = (3.0 * a * l * l + 2.0 * a * a * l * l * l) / (2.0 * (1.0 + a * l).powi(2));
        let step = (next - eps).abs();
        let scale = centred.abs() + eps.abs();
        // near a L = -1/4 the map contracts slowly and can stall a few ulps
        // short of the strict tolerance
        if step <= 1e-15 * scale || (step >= last_step && step <= 1e-13 * scale) {
            return Ok(next);
        }
        last_step = step;
        eps = next;
    }
    Err(OracleError::Domain(
        "fixed-point iteration did not settle".into(),
    ))
}

/// Bisection for `eps` on `[-|L|, |L|]`.
pub fn perturbation_solve(
    eta: f64,
    pi: f64,
    centred: f64,
) -> Result<PerturbationSolution, OracleError> {
    let a = check_domain(eta, pi, centred)?;
    let closed_form = perturbation_closed_form(eta, pi, centred)?;
    if centred == 0.0 {
        return Ok(PerturbationSolution {
            epsilon: 0.0,
            residual: 0.0,
            closed_form,
        });
    }
    // the gap decreases in eps on the bracket, since 1 + a (L + eps) >= 1/2
    let (mut lo, mut hi) = (-centred.abs(), centred.abs());
    let (g_lo, g_hi) = (defining_gap(a, centred, lo), defining_gap(a, centred, hi));
    if !(g_lo >= 0.0 && g_hi <= 0.0) {
        return Err(OracleError::Domain(format!(
            "no sign change on [-|L|, |L|]: gaps {g_lo} and {g_hi}"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if defining_gap(a, centred, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let epsilon = if defining_gap(a, centred, lo).abs() <= defining_gap(a, centred, hi).abs() {
        lo
    } else {
        hi
    };
    Ok(PerturbationSolution {
        epsilon,
        residual: defining_gap(a, centred, epsilon).abs(),
        closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_centred_loss_gives_zero() {
        let s = perturbation_solve(0.3, 0.4, 0.0).unwrap();
        assert_eq!(s.epsilon, 0.0);
        assert_eq!(s.closed_form, 0.0);
    }

    #[test]
    fn three_solvers_agree() {
        let s = perturbation_solve(0.1, 0.25, 1.0).unwrap();
        let fp = perturbation_fixed_point(0.1, 0.25, 1.0).unwrap();
        assert!(s.residual <= 1e-12);
        assert_abs_diff_eq!(s.epsilon, fp, epsilon = 1e-10);
        assert_abs_diff_eq!(s.epsilon, s.closed_form, epsilon = 1e-10);
        let l = 1.0 + s.epsilon;
        let a = 0.05;
        let rhs = (3.0 * a * l * l + 2.0 * a * a * l * l * l) / (1.0 + a * l).powi(2);
        assert_abs_diff_eq!(2.0 * s.epsilon, rhs, epsilon = 1e-12);
    }

    #[test]
    fn outside_assumption_is_refused() {
        assert!(perturbation_solve(1.0, 1.0, 0.3).is_err());
        assert!(perturbation_solve(1.0, 1.0, -0.26).is_err());
        assert!(perturbation_solve(0.0, 0.5, 0.1).is_err());
    }

    #[test]
    fn calibration_maximum() {
        // |eps| / |a L| at |L| = 1 peaks at the edge a L = 1/4
        let mut worst = 0.0f64;
        for j in 1..=2000 {
            let a = 0.25 * j as f64 / 2000.0;
            for l in [-1.0, 1.0] {
                let eps = perturbation_closed_form(a, 1.0, l).unwrap();
                worst = worst.max(eps.abs() / (a * l).abs());
            }
        }
        assert!(worst > 2.6 && worst < 2.63, "worst ratio {worst}");
        assert!(2.0 * worst <= PERTURBATION_CONSTANT);
    }
}

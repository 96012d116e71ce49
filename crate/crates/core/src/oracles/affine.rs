//! Affinity probe for `loss -> pi_{t+1}` at a fixed played arm.

use std::cmp::Ordering;

use super::OracleError;
use crate::algorithm::BanditAlgorithm;
use crate::simplex::BanditFeedback;

#[derive(Debug, Clone, PartialEq)]
pub struct AffineReport {
    pub arm: usize,
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    /// Sign of the slope, reported for the played arm only.
    pub slope_sign: Option<Ordering>,
}

/// Fits `next(loss)[i]` for every arm `i` through the two extreme grid points
/// and measures the deviation at the interior points.
pub fn affine_probe<F>(
    next: F,
    played: usize,
    grid: &[f64],
) -> Result<Vec<AffineReport>, OracleError>
where
    F: Fn(f64) -> Result<Vec<f64>, OracleError>,
{
    if grid.len() < 5 {
        return Err(OracleError::Domain(format!(
            "affine probe needs at least 5 grid points, got {}",
            grid.len()
        )));
    }
    let mut sorted = grid.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (x0, x1) = (sorted[0], sorted[sorted.len() - 1]);
    if x1 <= x0 {
        return Err(OracleError::Domain("grid spans a single point".into()));
    }
    let outputs = sorted
        .iter()
        .map(|&x| next(x))
        .collect::<Result<Vec<_>, _>>()?;
    let k = outputs[0].len();
    if played >= k || outputs.iter().any(|o| o.len() != k) {
        return Err(OracleError::Domain("inconsistent probe output".into()));
    }
    Ok((0..k)
        .map(|i| {
            let (y0, y1) = (outputs[0][i], outputs[outputs.len() - 1][i]);
            let slope = (y1 - y0) / (x1 - x0);
            let intercept = y0 - slope * x0;
            let max_residual = sorted[1..sorted.len() - 1]
                .iter()
                .zip(&outputs[1..outputs.len() - 1])
                .map(|(x, o)| (o[i] - (intercept + slope * x)).abs())
                .fold(0.0, f64::max);
            AffineReport {
                arm: i,
                slope,
                intercept,
                max_residual,
                slope_sign: (i == played)
                    .then(|| slope.partial_cmp(&0.0).unwrap_or(Ordering::Equal)),
            }
        })
        .collect())
}

/// [`affine_probe`] on a learner's internal weights after one counterfactual
/// update with arm `played`. The learner is cloned, never mutated. Proposals
/// are read before validation so probes also work outside the simplex.
pub fn probe_algorithm<A: BanditAlgorithm + Clone>(
    learner: &A,
    played: usize,
    grid: &[f64],
) -> Result<Vec<AffineReport>, OracleError> {
    let snapshot = learner.clone();
    let round = snapshot.round();
    affine_probe(
        |loss| {
            snapshot
                .propose(&BanditFeedback::new(round, played, loss))
                .map_err(|e| OracleError::Domain(e.to_string()))
        },
        played,
        grid,
    )
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|j| lo + (hi - lo) * j as f64 / (n - 1) as f64)
        .collect()
}

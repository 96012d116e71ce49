//! Oracle batteries behind the `verify` subcommand.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::algorithm::BanditAlgorithm;
use crate::algorithms::{
    AlgorithmSpec, AnyAlgorithm, Exp3, LbProd, TsProd, TsProdConfig, WsuUx, WsuUxParams,
};
use crate::oracles::{
    enumerate_step_expectation, linear_grid, min_prob_scan, perturbation_fixed_point,
    perturbation_solve, probe_algorithm, ts_moment_check, MomentRule, ScanLosses, TsMomentOutcome,
    ASSUMPTION_BOUND, IDENTITY_TOLERANCE, PERTURBATION_CONSTANT,
};
use crate::rng::{streams, RngStream};
use crate::simplex::{sample_arm, BanditFeedback, LossRange, SimplexDistribution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Moments,
    Affinity,
    TsValidity,
    Perturbation,
    SimplexFuzz,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Moments,
        Suite::Affinity,
        Suite::TsValidity,
        Suite::Perturbation,
        Suite::SimplexFuzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Moments => "moments",
            Suite::Affinity => "affinity",
            Suite::TsValidity => "ts-validity",
            Suite::Perturbation => "perturbation",
            Suite::SimplexFuzz => "simplex-fuzz",
        }
    }

    /// Parses a suite name; `all` expands to every suite.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>, String> {
        if s == "all" {
            return Ok(Suite::ALL.to_vec());
        }
        s.split(',')
            .map(|name| {
                Suite::ALL
                    .iter()
                    .copied()
                    .find(|suite| suite.name() == name.trim())
                    .ok_or_else(|| format!("unknown suite {name:?}"))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteStatus {
    Pass,
    /// Passed, and one check reproduced a known breach.
    DocumentedBreach,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// What the check expects, for example "affine" or "non-affine".
    pub expectation: String,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, expectation: &str, detail: String) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed,
        expectation: expectation.into(),
        detail,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub status: SuiteStatus,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: Vec<CheckResult>, documented_breach: bool) -> Self {
        let status = if !checks.iter().all(|c| c.passed) {
            SuiteStatus::Fail
        } else if documented_breach {
            SuiteStatus::DocumentedBreach
        } else {
            SuiteStatus::Pass
        };
        Self {
            suite,
            status,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != SuiteStatus::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

/// Battery sizes. The defaults finish in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random instances per moment, affinity and perturbation battery.
    pub cases: usize,
    pub fuzz_steps: u64,
    pub fuzz_seeds: u64,
    pub fuzz_arms: [usize; 4],
    pub scan_horizon: u64,
    pub scan_trials: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            cases: 1000,
            fuzz_steps: 10_000,
            fuzz_seeds: 4,
            fuzz_arms: [2, 4, 8, 32],
            scan_horizon: 10_000,
            scan_trials: 20,
        }
    }
}

/// Dirichlet(1) weights mixed with `mix` of the uniform distribution.
pub fn random_weights(num_arms: usize, mix: f64, rng: &mut RngStream) -> Vec<f64> {
    let raw: Vec<f64> = (0..num_arms)
        .map(|_| -(1.0 - rng.next_uniform()).ln() + 1e-300)
        .collect();
    let total: f64 = raw.iter().sum();
    let k = num_arms as f64;
    let mixed: Vec<f64> = raw
        .iter()
        .map(|r| (1.0 - mix) * r / total + mix / k)
        .collect();
    let total: f64 = mixed.iter().sum();
    mixed.iter().map(|p| p / total).collect()
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    match suite {
        Suite::Moments => moments_suite(opts),
        Suite::Affinity => affinity_suite(opts),
        Suite::TsValidity => ts_validity_suite(opts),
        Suite::Perturbation => perturbation_suite(opts),
        Suite::SimplexFuzz => simplex_fuzz_suite(opts),
    }
}

pub fn verify(suites: &[Suite], opts: &VerifyOptions) -> VerifyReport {
    let reports: Vec<SuiteReport> = suites.iter().map(|&s| run_suite(s, opts)).collect();
    VerifyReport {
        passed: reports.iter().all(SuiteReport::passed),
        suites: reports,
    }
}

fn moments_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rng = RngStream::new(opts.seed, streams::FUZZ);
    let (mut worst, mut violations, mut centre_out) = (0.0f64, 0usize, 0usize);
    for _ in 0..opts.cases {
        let k = 2 + rng.index(7);
        let pi = random_weights(k, 0.0, &mut rng);
        let losses: Vec<f64> = (0..k).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
        let r = enumerate_step_expectation(MomentRule::LbProd, &pi, &losses).expect("K <= 8");
        worst = worst.max(r.max_residual());
        violations += r.bound_violations().len();
        centre_out += usize::from(!(-1.0..=1.0).contains(&r.centre));
    }
    let mut checks = vec![check(
        "lb-prod first and second moments",
        worst <= IDENTITY_TOLERANCE && violations == 0 && centre_out == 0,
        "identity holds, second moment <= 2 pi, c_t in [-1, 1]",
        format!("{} cases: max residual {worst:e}, {violations} bound violations, {centre_out} centres outside [-1, 1]", opts.cases),
    )];

    let (mut worst, mut violations, mut unmet) = (0.0f64, 0usize, 0usize);
    for _ in 0..opts.cases {
        let k = 2 + rng.index(7);
        let pi = random_weights(k, 0.5, &mut rng);
        let losses: Vec<f64> = (0..k).map(|_| rng.next_uniform()).collect();
        let t = 1 + rng.index(10_000) as u64;
        match ts_moment_check(&pi, &losses, t, 1e6).expect("K <= 8") {
            TsMomentOutcome::Checked(r) => {
                worst = worst.max(r.max_residual());
                violations += r.bound_violations().len();
            }
            TsMomentOutcome::HypothesisUnmet { .. } => unmet += 1,
        }
    }
    checks.push(check(
        "ts-prod first and second moments",
        worst <= IDENTITY_TOLERANCE && violations == 0 && unmet == 0,
        "identity holds, second moment <= 13/8 pi (1 - pi)",
        format!("{} cases at c0 = 1e6: max residual {worst:e}, {violations} bound violations, {unmet} unmet hypotheses", opts.cases),
    ));
    let unmet_small = matches!(
        ts_moment_check(&[0.5, 0.5], &[0.5, 0.5], 1, 2.0),
        Ok(TsMomentOutcome::HypothesisUnmet { .. })
    );
    checks.push(check(
        "ts-prod hypothesis at c0 = 2",
        unmet_small,
        "hypothesis unmet",
        "t = 1, K = 2, uniform weights".into(),
    ));
    SuiteReport::new(Suite::Moments, checks, false)
}

/// Largest interior residual and the played-arm slope over `cases` states.
struct AffinityStats {
    max_residual: f64,
    non_negative_slopes: usize,
}

fn probe_many<F>(cases: usize, rng: &mut RngStream, range: LossRange, mut make: F) -> AffinityStats
where
    F: FnMut(&mut RngStream) -> AnyAlgorithm,
{
    let (lo, hi) = range.bounds();
    let grid = linear_grid(lo, hi, 9);
    let mut stats = AffinityStats {
        max_residual: 0.0,
        non_negative_slopes: 0,
    };
    for _ in 0..cases {
        let alg = make(rng);
        let arm = rng.index(alg.num_arms());
        let reports = probe_algorithm(&alg, arm, &grid).expect("grid has 9 points");
        for r in &reports {
            stats.max_residual = stats.max_residual.max(r.max_residual);
        }
        if reports[arm].slope_sign != Some(Ordering::Less) {
            stats.non_negative_slopes += 1;
        }
    }
    stats
}

/// Random learner states used by the affinity battery.
pub fn fuzzed_state(id: &str, rng: &mut RngStream) -> AnyAlgorithm {
    let k = 2 + rng.index(7);
    let pi = SimplexDistribution::new(random_weights(k, 0.05, rng)).expect("valid weights");
    match id {
        "wsu-ux" | "bwsu" => {
            let gamma = rng.uniform_in(0.05, 0.9);
            let eta = gamma / (2.0 * k as f64) * rng.uniform_in(0.05, 1.0);
            let params = WsuUxParams::new(eta, gamma, id == "bwsu");
            AnyAlgorithm::WsuUx(WsuUx::from_state(pi, 1, params).expect("eta K / gamma <= 1/2"))
        }
        "lb-prod" => AnyAlgorithm::LbProd(
            LbProd::from_state(pi, 1, rng.uniform_in(0.01, 0.95)).expect("eta < 1"),
        ),
        "ts-prod" => {
            let round = 1 + rng.index(10_000) as u64;
            AnyAlgorithm::TsProd(
                TsProd::from_state(pi, round, TsProdConfig::with_offset(1e6)).expect("offset >= 1"),
            )
        }
        "exp3" => {
            AnyAlgorithm::Exp3(Exp3::from_state(pi, 1, rng.uniform_in(0.1, 2.0)).expect("eta > 0"))
        }
        other => panic!("no fuzzed state for {other}"),
    }
}

fn affinity_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rng = RngStream::new(opts.seed, streams::FUZZ);
    let mut checks = Vec::new();
    for (id, range) in [
        ("wsu-ux", LossRange::Unit),
        ("bwsu", LossRange::Unit),
        ("lb-prod", LossRange::Signed),
        ("ts-prod", LossRange::Unit),
    ] {
        let s = probe_many(opts.cases, &mut rng, range, |r| fuzzed_state(id, r));
        checks.push(check(
            id,
            s.max_residual <= 1e-10 && s.non_negative_slopes == 0,
            "affine",
            format!(
                "{} states: max residual {:e}, {} played-arm slopes >= 0",
                opts.cases, s.max_residual, s.non_negative_slopes
            ),
        ));
    }
    let s = probe_many(opts.cases, &mut rng, LossRange::Unit, |r| {
        fuzzed_state("exp3", r)
    });
    checks.push(check(
        "exp3",
        s.max_residual > 1e-3,
        "non-affine",
        format!("{} states: max residual {:e}", opts.cases, s.max_residual),
    ));
    SuiteReport::new(Suite::Affinity, checks, false)
}

fn ts_validity_suite(opts: &VerifyOptions) -> SuiteReport {
    let small = min_prob_scan(2, 2.0, 100, 1, ScanLosses::Uniform, opts.seed).expect("valid scan");
    let large = min_prob_scan(
        2,
        1e5,
        opts.scan_horizon,
        opts.scan_trials,
        ScanLosses::Uniform,
        opts.seed,
    )
    .expect("valid scan");
    let floor_hits = large.floor_violations();
    let checks = vec![
        check(
            "c0 = K",
            small.first_breach_round == Some(1),
            "documented breach at round 1",
            format!("first breach {:?}", small.first_breach_round),
        ),
        check(
            "c0 = 1e5",
            large.first_breach_round.is_none() && floor_hits.is_empty(),
            "no breach, min probability above floor",
            format!(
                "horizon {}, {} trials: first breach {:?}, {} rounds at or below the floor",
                opts.scan_horizon,
                opts.scan_trials,
                large.first_breach_round,
                floor_hits.len()
            ),
        ),
    ];
    SuiteReport::new(Suite::TsValidity, checks, true)
}

fn perturbation_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut rng = RngStream::new(opts.seed, streams::FUZZ);
    let (mut worst_residual, mut worst_ratio, mut worst_disagree) = (0.0f64, 0.0f64, 0.0f64);
    let (mut negative, mut done) = (0usize, 0usize);
    while done < opts.cases {
        let eta = rng.uniform_in(1e-3, 1.0);
        let pi = rng.uniform_in(1e-6, 1.0);
        let centred = rng.uniform_in(-1.0, 1.0);
        let a = eta * pi.sqrt();
        if (a * centred).abs() > ASSUMPTION_BOUND {
            continue;
        }
        done += 1;
        let s = perturbation_solve(eta, pi, centred).expect("inside the assumption region");
        let fp = perturbation_fixed_point(eta, pi, centred).expect("inside the assumption region");
        worst_residual = worst_residual.max(s.residual);
        worst_disagree = worst_disagree
            .max((s.epsilon - s.closed_form).abs())
            .max((s.epsilon - fp).abs());
        if centred != 0.0 {
            worst_ratio = worst_ratio.max(s.epsilon.abs() / (a * centred).abs());
        }
        negative += usize::from(s.epsilon < 0.0);
    }
    let zero = perturbation_solve(0.5, 0.5, 0.0).map(|s| s.epsilon);
    let checks = vec![
        check(
            "defining equation",
            worst_residual <= 1e-12 && worst_disagree <= 1e-10,
            "residual <= 1e-12, solvers agree",
            format!(
                "{} cases: max residual {worst_residual:e}, max solver gap {worst_disagree:e}",
                opts.cases
            ),
        ),
        check(
            "bound",
            worst_ratio <= PERTURBATION_CONSTANT,
            "|eps| <= c |eta sqrt(pi) L| for |L| <= 1",
            format!("max ratio {worst_ratio:.6}, c = {PERTURBATION_CONSTANT}"),
        ),
        check(
            "sign",
            negative == 0,
            "eps >= 0",
            format!("{negative} negative"),
        ),
        check(
            "zero",
            zero == Ok(0.0),
            "eps = 0 at L = 0",
            format!("{zero:?}"),
        ),
    ];
    SuiteReport::new(Suite::Perturbation, checks, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FuzzOutcome {
    pub steps: u64,
    pub breaches: u64,
    pub other_errors: u64,
    /// Largest `|sum - 1|` seen in the sampling and internal weights.
    pub max_sum_error: f64,
}

impl FuzzOutcome {
    pub fn merge(self, other: FuzzOutcome) -> FuzzOutcome {
        FuzzOutcome {
            steps: self.steps + other.steps,
            breaches: self.breaches + other.breaches,
            other_errors: self.other_errors + other.other_errors,
            max_sum_error: self.max_sum_error.max(other.max_sum_error),
        }
    }

    pub fn clean(&self) -> bool {
        self.breaches == 0 && self.other_errors == 0 && self.max_sum_error <= 1e-9
    }
}

fn sum_error(d: &SimplexDistribution) -> f64 {
    (d.weights().iter().sum::<f64>() - 1.0).abs()
}

/// Plays `steps` rounds of random losses against a tuned learner. Losses span
/// the learner's whole declared range. A trial stops at its first error.
pub fn simplex_fuzz(spec: &AlgorithmSpec, num_arms: usize, steps: u64, seed: u64) -> FuzzOutcome {
    let mut out = FuzzOutcome::default();
    let mut alg = match spec.build(num_arms, steps) {
        Ok(a) => a,
        Err(_) => {
            out.other_errors = 1;
            return out;
        }
    };
    let (lo, hi) = alg.loss_range().bounds();
    let mut rng = RngStream::new(seed, streams::FUZZ);
    for t in 1..=steps {
        let arm = sample_arm(alg.distribution().weights(), &mut rng);
        let loss = rng.uniform_in(lo, hi);
        match alg.update(&BanditFeedback::new(t, arm, loss)) {
            Ok(()) => {}
            Err(e) if e.breach().is_some() => {
                out.breaches += 1;
                break;
            }
            Err(_) => {
                out.other_errors += 1;
                break;
            }
        }
        out.steps += 1;
        out.max_sum_error = out
            .max_sum_error
            .max(sum_error(alg.distribution()))
            .max(sum_error(alg.weights()));
    }
    out
}

pub fn fuzz_specs() -> Vec<AlgorithmSpec> {
    vec![
        AlgorithmSpec::WsuUx {
            eta: None,
            gamma: None,
        },
        AlgorithmSpec::Bwsu {
            eta: None,
            gamma: None,
        },
        AlgorithmSpec::LbProd { eta: None },
        AlgorithmSpec::TsOmdDs {},
    ]
}

fn simplex_fuzz_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut checks = Vec::new();
    for spec in fuzz_specs() {
        for &k in &opts.fuzz_arms {
            let total = (0..opts.fuzz_seeds)
                .map(|s| simplex_fuzz(&spec, k, opts.fuzz_steps, opts.seed.wrapping_add(s)))
                .fold(FuzzOutcome::default(), FuzzOutcome::merge);
            checks.push(check(
                format!("{} K={k}", spec.id()),
                total.clean() && total.steps == opts.fuzz_steps * opts.fuzz_seeds,
                "no breach, |sum - 1| <= 1e-9",
                format!(
                    "{} steps, {} breaches, {} other errors, max |sum - 1| {:e}",
                    total.steps, total.breaches, total.other_errors, total.max_sum_error
                ),
            ));
        }
    }
    SuiteReport::new(Suite::SimplexFuzz, checks, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyOptions {
        VerifyOptions {
            cases: 100,
            fuzz_steps: 1000,
            fuzz_seeds: 1,
            scan_horizon: 500,
            scan_trials: 2,
            ..VerifyOptions::default()
        }
    }

    #[test]
    fn every_suite_passes_small() {
        let report = verify(&Suite::ALL, &quick());
        for s in &report.suites {
            assert!(s.passed(), "{:?}", s);
        }
        assert!(report.passed);
        let ts = report
            .suites
            .iter()
            .find(|s| s.suite == Suite::TsValidity)
            .unwrap();
        assert_eq!(ts.status, SuiteStatus::DocumentedBreach);
    }

    #[test]
    fn suite_names() {
        assert_eq!(Suite::parse_list("all").unwrap().len(), 5);
        assert_eq!(
            Suite::parse_list("affinity,ts-validity").unwrap(),
            vec![Suite::Affinity, Suite::TsValidity]
        );
        assert!(Suite::parse_list("nope").is_err());
    }

    #[test]
    fn random_weights_lie_on_simplex() {
        let mut rng = RngStream::new(1, streams::FUZZ);
        for k in [2, 5, 64] {
            let w = random_weights(k, 0.1, &mut rng);
            assert!(SimplexDistribution::new(w.clone()).is_ok());
            assert!(w.iter().all(|&p| p >= 0.1 / k as f64 * 0.999));
        }
    }
}

use ic_bandits::algorithm::BanditAlgorithm;
use ic_bandits::algorithms::AnyAlgorithm;
use ic_bandits::environments::{
    report_grid, squared_loss, strategic_report, ForecastingEnv, ReportPolicy,
};
use ic_bandits::harness::fuzzed_state;
use ic_bandits::rng::{streams, RngStream};
use ic_bandits::simplex::{sample_arm, BanditFeedback};

/// The expert's expected next weight with every arm draw and both outcomes
/// enumerated, the other experts reporting `others`.
fn full_expectation(
    learner: &AnyAlgorithm,
    expert: usize,
    belief: f64,
    others: &[f64],
    r: f64,
) -> f64 {
    let play = learner.distribution().weights();
    let mut value = 0.0;
    for (arm, &p) in play.iter().enumerate() {
        for (rain, q) in [(true, belief), (false, 1.0 - belief)] {
            let report = if arm == expert { r } else { others[arm] };
            let fb = BanditFeedback::new(learner.round(), arm, squared_loss(rain, report));
            value += p * q * learner.propose(&fb).unwrap()[expert];
        }
    }
    value
}

#[test]
fn shortcut_matches_full_enumeration() {
    let h = 0.02;
    let mut rng = RngStream::new(21, streams::FUZZ);
    for id in ["wsu-ux", "bwsu", "lb-prod", "ts-prod"] {
        for _ in 0..40 {
            let learner = fuzzed_state(id, &mut rng);
            let k = learner.num_arms();
            let expert = rng.index(k);
            let belief = rng.next_uniform();
            let others: Vec<f64> = (0..k).map(|_| rng.next_uniform()).collect();
            let values: Vec<f64> = report_grid(h)
                .into_iter()
                .map(|r| full_expectation(&learner, expert, belief, &others, r))
                .collect();
            let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let pick = strategic_report(&learner, expert, belief, h);
            let at_pick = full_expectation(&learner, expert, belief, &others, pick);
            assert!(
                best - at_pick <= 1e-12,
                "{id}: pick {pick} loses {:e}",
                best - at_pick
            );
            assert!(
                (pick - belief).abs() <= h,
                "{id}: belief {belief}, report {pick}"
            );
        }
    }
}

#[test]
fn strategic_experts_report_beliefs_during_play() {
    let h = 0.01;
    for id in ["bwsu", "lb-prod", "ts-prod"] {
        let mut rng = RngStream::new(4, streams::FUZZ);
        let mut learner = fuzzed_state(id, &mut rng);
        let k = learner.num_arms();
        let policies = (0..k)
            .map(|i| {
                if i % 2 == 0 {
                    ReportPolicy::Strategic { grid: h }
                } else {
                    ReportPolicy::Truthful
                }
            })
            .collect();
        let mut env = ForecastingEnv::new(policies, k - 1, 8).unwrap();
        let mut sampler = RngStream::new(8, streams::SAMPLER);
        for _ in 0..150 {
            let t = learner.round();
            let losses = env.next_losses(t, &learner).unwrap();
            let round = env.last_round().unwrap();
            for i in (0..k).step_by(2) {
                assert!(
                    (round.reports[i] - round.beliefs[i]).abs() <= h,
                    "{id} round {t} expert {i}"
                );
            }
            let arm = sample_arm(learner.distribution().weights(), &mut sampler);
            learner
                .update(&BanditFeedback::from_losses(t, arm, &losses))
                .unwrap();
        }
    }
}

#[test]
fn exp3_invites_misreports() {
    let mut rng = RngStream::new(2, streams::FUZZ);
    let worst = (0..200)
        .map(|_| {
            let learner = fuzzed_state("exp3", &mut rng);
            let expert = rng.index(learner.num_arms());
            let belief = rng.next_uniform();
            (strategic_report(&learner, expert, belief, 0.01) - belief).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst > 0.01, "largest misreport {worst}");
}

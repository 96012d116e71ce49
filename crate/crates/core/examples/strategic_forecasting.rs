//! Forecasters who choose reports to maximize their next-round weight.
//! Under an incentive-compatible learner they report their beliefs; under
//! Exp3 they do not.

use ic_bandits::algorithm::BanditAlgorithm;
use ic_bandits::algorithms::{AnyAlgorithm, Exp3, LbProd};
use ic_bandits::environments::{ForecastingEnv, ReportPolicy};
use ic_bandits::rng::{streams, RngStream};
use ic_bandits::simplex::{sample_arm, BanditFeedback};

fn play(mut learner: AnyAlgorithm, rounds: u64) -> f64 {
    let k = learner.num_arms();
    let policies = vec![ReportPolicy::Strategic { grid: 0.01 }; k];
    let mut env = ForecastingEnv::new(policies, 0, 7).expect("valid game");
    let mut sampler = RngStream::new(7, streams::SAMPLER);
    let mut worst = 0.0f64;
    for t in 1..=rounds {
        let losses = env.next_losses(t, &learner).expect("learner matches game");
        let r = env.last_round().expect("round played");
        for (b, rep) in r.beliefs.iter().zip(&r.reports) {
            worst = worst.max((b - rep).abs());
        }
        let arm = sample_arm(learner.distribution().weights(), &mut sampler);
        learner
            .update(&BanditFeedback::from_losses(t, arm, &losses))
            .expect("valid update");
    }
    worst
}

fn main() {
    let rounds = 2000;
    let lb = AnyAlgorithm::LbProd(LbProd::tuned(3, rounds).unwrap());
    let exp3 = AnyAlgorithm::Exp3(Exp3::new(3, 0.5).unwrap());
    println!("largest |report - belief| over {rounds} rounds");
    println!("  lb-prod {:.4}", play(lb, rounds));
    println!("  exp3    {:.4}", play(exp3, rounds));
}

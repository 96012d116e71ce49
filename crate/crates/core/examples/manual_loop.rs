//! Driving a learner by hand: sample from `distribution()`, reveal only the
//! played loss, and track regret with a ledger.

use ic_bandits::algorithm::BanditAlgorithm;
use ic_bandits::algorithms::{WsuUx, WsuUxParams};
use ic_bandits::environments::StochasticBernoulliEnv;
use ic_bandits::regret::RegretLedger;
use ic_bandits::rng::{streams, RngStream};
use ic_bandits::simplex::BanditFeedback;

fn main() {
    let horizon = 20_000;
    let env = StochasticBernoulliEnv::new(vec![0.5, 0.3, 0.6, 0.55], 1).unwrap();
    let params = WsuUxParams::tuned_biased(4, horizon).unwrap();
    let mut learner = WsuUx::new(4, params).unwrap();
    let mut sampler = RngStream::new(1, streams::SAMPLER);
    let mut ledger = RegretLedger::new(4);
    for t in 1..=horizon {
        let losses = env.losses_at(t);
        let arm = learner.distribution().sample(&mut sampler);
        ledger
            .record(learner.distribution().weights(), losses.losses(), arm)
            .unwrap();
        learner
            .update(&BanditFeedback::from_losses(t, arm, &losses))
            .unwrap();
        if t.is_power_of_two() || t == horizon {
            println!(
                "t={t:>6} pseudo-regret {:8.2}",
                ledger.current_pseudo_regret()
            );
        }
    }
    println!("final weights {:.4?}", learner.weights().weights());
}

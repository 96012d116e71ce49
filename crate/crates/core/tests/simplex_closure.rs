use ic_bandits::algorithm::BanditAlgorithm;
use ic_bandits::algorithms::{AlgorithmSpec, TsOmdDs, TsOmdSchedule, STEP_MAGNITUDE_BOUND};
use ic_bandits::harness::{fuzzed_state, random_weights};
use ic_bandits::rng::{streams, RngStream};
use ic_bandits::simplex::{sample_arm, BanditFeedback, SimplexDistribution};
use proptest::prelude::*;

fn on_simplex(w: &[f64]) -> bool {
    w.iter().all(|p| (0.0..=1.0).contains(p)) && (w.iter().sum::<f64>() - 1.0).abs() <= 1e-9
}

fn specs() -> Vec<AlgorithmSpec> {
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
        AlgorithmSpec::TsProd {
            schedule_offset: Some(1e5),
        },
        AlgorithmSpec::TsOmdDs {},
        AlgorithmSpec::Exp3 { eta: None },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tuned_learners_stay_on_the_simplex(k in 2usize..=16, which in 0usize..6, seed in any::<u64>()) {
        let spec = &specs()[which];
        let mut alg = spec.build(k, 20_000).unwrap();
        let (lo, hi) = alg.loss_range().bounds();
        let mut rng = RngStream::new(seed, streams::FUZZ);
        for t in 1..=400 {
            let arm = sample_arm(alg.distribution().weights(), &mut rng);
            let loss = rng.uniform_in(lo, hi);
            alg.update(&BanditFeedback::new(t, arm, loss)).unwrap();
            prop_assert!(on_simplex(alg.distribution().weights()), "{} round {t}", spec.id());
            prop_assert!(on_simplex(alg.weights().weights()), "{} round {t}", spec.id());
        }
    }

    #[test]
    fn fuzzed_states_step_onto_the_simplex(which in 0usize..4, seed in any::<u64>()) {
        let id = ["wsu-ux", "bwsu", "lb-prod", "ts-prod"][which];
        let mut rng = RngStream::new(seed, streams::FUZZ);
        let mut alg = fuzzed_state(id, &mut rng);
        let (lo, hi) = alg.loss_range().bounds();
        for _ in 0..50 {
            let arm = rng.index(alg.num_arms());
            let fb = BanditFeedback::new(alg.round(), arm, rng.uniform_in(lo, hi));
            alg.update(&fb).unwrap();
            prop_assert!(on_simplex(alg.distribution().weights()));
        }
    }

    /// First-order agreement between the Prod form and the exact mirror step.
    #[test]
    fn ts_omd_linearization_error_is_quadratic(
        k in 2usize..=32,
        mix in 0.0f64..1.0,
        round in 1u64..100_000,
        arm_pick in 0.0f64..1.0,
        loss in 0.0f64..=1.0,
        seed in any::<u64>(),
    ) {
        let mut rng = RngStream::new(seed, streams::FUZZ);
        let pi = random_weights(k, mix, &mut rng);
        let alg = TsOmdDs::from_state(SimplexDistribution::new(pi.clone()).unwrap(), round, TsOmdSchedule::Anytime).unwrap();
        let arm = ((arm_pick * k as f64) as usize).min(k - 1);
        let step = alg.step(arm, loss);
        let x = step.magnitude(&pi);
        prop_assume!(x <= STEP_MAGNITUDE_BOUND);
        let (exact, _) = alg.exact_step(&step).unwrap();
        let linear = alg.linearized_step(arm, loss);
        let gap = exact.iter().zip(&linear).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(gap <= 8.0 * x * x + 1e-12, "gap {gap:e}, magnitude {x}");
    }
}

#[test]
fn constant_schedule_linearization_on_a_grid() {
    // the constant schedule has no stabilization bias, so the only source of
    // error is the second-order term
    let pi = SimplexDistribution::new(vec![0.2, 0.3, 0.5]).unwrap();
    for eta in [0.01, 0.05, 0.1] {
        let alg = TsOmdDs::from_state(pi.clone(), 1, TsOmdSchedule::Constant { eta, gamma: 0.0 })
            .unwrap();
        for arm in 0..3 {
            let step = alg.step(arm, 1.0);
            let x = step.magnitude(pi.weights());
            let (exact, _) = alg.exact_step(&step).unwrap();
            let gap = exact
                .iter()
                .zip(alg.linearized_step(arm, 1.0))
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(
                gap <= 8.0 * x * x,
                "eta {eta} arm {arm}: gap {gap:e}, x {x}"
            );
        }
    }
}

use ic_bandits::algorithm::BanditAlgorithm;
use ic_bandits::algorithms::AlgorithmSpec;
use ic_bandits::environments::EnvironmentSpec;
use ic_bandits::harness::{run, scaling_report, Cadence, ExperimentConfig, RunSection};
use ic_bandits::regret::RegretLedger;
use ic_bandits::rng::{streams, RngStream};
use ic_bandits::simplex::{sample_arm, BanditFeedback};

/// `sum_t <pi_t, l_t> - min_i sum_t l_{t,i}` by a plain double loop.
fn brute_force(plays: &[Vec<f64>], losses: &[Vec<f64>]) -> f64 {
    let k = losses[0].len();
    let mut expected = 0.0;
    for (p, l) in plays.iter().zip(losses) {
        for i in 0..k {
            expected += p[i] * l[i];
        }
    }
    let best = (0..k)
        .map(|i| losses.iter().map(|l| l[i]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    expected - best
}

#[test]
fn ledger_matches_double_loop_on_random_matrices() {
    let mut rng = RngStream::new(17, streams::FUZZ);
    for _ in 0..50 {
        let (rows, k) = (5, 3);
        let losses: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..k).map(|_| rng.next_uniform()).collect())
            .collect();
        let plays: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                let raw: Vec<f64> = (0..k).map(|_| rng.next_uniform() + 0.01).collect();
                let s: f64 = raw.iter().sum();
                raw.iter().map(|x| x / s).collect()
            })
            .collect();
        let mut ledger = RegretLedger::new(k);
        for (p, l) in plays.iter().zip(&losses) {
            ledger.record(p, l, 0).unwrap();
        }
        let got = ledger.pseudo_regret(rows as u64).unwrap();
        assert!((got - brute_force(&plays, &losses)).abs() <= 1e-12);
    }
}

#[test]
fn harness_regret_matches_recomputed_trace() {
    let cases = [
        (
            AlgorithmSpec::LbProd { eta: None },
            EnvironmentSpec::Switching {
                arms: 3,
                period: Some(37),
                period_fraction: None,
            },
        ),
        (
            AlgorithmSpec::Bwsu {
                eta: None,
                gamma: None,
            },
            EnvironmentSpec::Bernoulli {
                means: vec![0.3, 0.5],
            },
        ),
        (
            AlgorithmSpec::TsOmdDs {},
            EnvironmentSpec::Forecasting {
                experts: 3,
                calibrated_expert: 2,
                strategic: vec![0],
                grid: 0.05,
            },
        ),
    ];
    let horizon = 3000;
    for (alg_spec, env_spec) in cases {
        let mut section = RunSection::new(horizon, 3);
        section.base_seed = 40;
        section.cadence = Cadence::Every;
        let config = ExperimentConfig::new(alg_spec.clone(), env_spec.clone(), section);
        let result = run(&config).unwrap();
        for traj in &result.seeds {
            let mut env = env_spec.build(traj.seed, horizon).unwrap();
            let mut alg = alg_spec.build(env.num_arms(), horizon).unwrap();
            let mut sampler = RngStream::new(traj.seed, streams::SAMPLER);
            let (mut plays, mut losses) = (Vec::new(), Vec::new());
            for t in 1..=horizon {
                let l = env.next_losses(t, &alg).unwrap();
                let arm = sample_arm(alg.distribution().weights(), &mut sampler);
                plays.push(alg.distribution().weights().to_vec());
                losses.push(l.losses().to_vec());
                alg.update(&BanditFeedback::from_losses(t, arm, &l))
                    .unwrap();
                if t % 500 == 0 {
                    let stored = traj.pseudo_regret[t as usize - 1];
                    let recomputed = brute_force(&plays, &losses);
                    assert!(
                        (stored - recomputed).abs() <= 1e-9,
                        "{} seed {} t {t}",
                        alg_spec.id(),
                        traj.seed
                    );
                }
            }
        }
    }
}

fn switching() -> EnvironmentSpec {
    EnvironmentSpec::Switching {
        arms: 2,
        period: None,
        period_fraction: Some(0.75),
    }
}

#[test]
fn lb_prod_sanity_band() {
    let (k, t) = (2.0f64, 10_000u64);
    let result = run(&ExperimentConfig::new(
        AlgorithmSpec::LbProd { eta: None },
        switching(),
        RunSection::new(t, 20),
    ))
    .unwrap();
    let scale = (k * t as f64 * (t as f64).ln()).sqrt();
    let r = result.final_mean();
    assert!(
        (0.2 * scale..=3.0 * scale).contains(&r),
        "mean regret {r}, scale {scale}"
    );
}

#[test]
fn lb_prod_adversarial_ratios() {
    let results: Vec<_> = [4000, 16_000, 64_000]
        .iter()
        .map(|&t| {
            run(&ExperimentConfig::new(
                AlgorithmSpec::LbProd { eta: None },
                switching(),
                RunSection::new(t, 20),
            ))
            .unwrap()
        })
        .collect();
    let report = scaling_report(&results).unwrap();
    for p in &report.pairs {
        assert!(
            (1.7..=2.6).contains(&p.ratio),
            "R({})/R({}) = {}",
            p.to,
            p.from,
            p.ratio
        );
    }
}

#[test]
fn ts_prod_stochastic_ratio_is_sub_sqrt() {
    let results: Vec<_> = [10_000, 40_000]
        .iter()
        .map(|&t| {
            run(&ExperimentConfig::new(
                AlgorithmSpec::TsProd {
                    schedule_offset: Some(1000.0),
                },
                EnvironmentSpec::Bernoulli {
                    means: vec![0.1, 0.6],
                },
                RunSection::new(t, 20),
            ))
            .unwrap()
        })
        .collect();
    assert!(results.iter().all(|r| r.breaches.is_empty()));
    let report = scaling_report(&results).unwrap();
    assert!(report.pairs[0].ratio <= 1.8, "{}", report.pairs[0].ratio);
}

//! Incentive-compatible bandit algorithms for expert selection.
//!
//! Every learner implements [`algorithm::BanditAlgorithm`]: it exposes the
//! distribution the next arm is drawn from and updates on the played arm's
//! loss alone. The Prod-family learners ([`algorithms::WsuUx`],
//! [`algorithms::LbProd`], [`algorithms::TsProd`]) move each expert's weight
//! affinely in that expert's reported loss, so a forecaster scored by a proper
//! scoring rule maximizes its expected weight by reporting its belief.
//! [`algorithms::TsOmdDs`] and [`algorithms::Exp3`] are included for
//! comparison.
//!
//! [`oracles`] recomputes per-step identities by enumerating the arm draw,
//! [`environments`] provides stochastic, adversarial and strategic-forecaster
//! loss processes, and [`harness`] runs seeded experiments and writes CSV and
//! JSON results.
//!
//! ```
//! use ic_bandits::algorithm::BanditAlgorithm;
//! use ic_bandits::algorithms::LbProd;
//! use ic_bandits::simplex::BanditFeedback;
//!
//! let mut learner = LbProd::new(3, 0.1).unwrap();
//! learner.update(&BanditFeedback::new(1, 0, 0.8)).unwrap();
//! let w = learner.distribution().weights();
//! assert!(w[0] < w[1] && (w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
//! ```

pub mod algorithm;
pub mod algorithms;
pub mod environments;
pub mod harness;
pub mod oracles;
pub mod regret;
pub mod rng;
pub mod simplex;

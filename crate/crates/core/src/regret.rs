//! Pseudo-regret accounting against the best fixed expert.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LedgerError {
    #[error("asked for round {requested} but the ledger holds {recorded} rounds")]
    RoundMismatch { requested: u64, recorded: u64 },
    #[error("ledger tracks {expected} arms, got a vector of {got}")]
    ArmCount { expected: usize, got: usize },
}

/// Running sums for one trace.
///
/// The comparator is chosen at query time from the per-arm totals, so the best
/// arm may change from one query to the next.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretLedger {
    rounds: u64,
    expected_loss: f64,
    realized_loss: f64,
    per_arm: Vec<f64>,
}

impl RegretLedger {
    pub fn new(num_arms: usize) -> Self {
        Self {
            rounds: 0,
            expected_loss: 0.0,
            realized_loss: 0.0,
            per_arm: vec![0.0; num_arms],
        }
    }

    /// Adds one round: the play distribution, the full loss vector and the arm
    /// actually played.
    pub fn record(&mut self, play: &[f64], losses: &[f64], arm: usize) -> Result<(), LedgerError> {
        let k = self.per_arm.len();
        if play.len() != k || losses.len() != k {
            return Err(LedgerError::ArmCount {
                expected: k,
                got: play.len().max(losses.len()),
            });
        }
        self.expected_loss += play.iter().zip(losses).map(|(p, l)| p * l).sum::<f64>();
        self.realized_loss += losses[arm];
        for (acc, l) in self.per_arm.iter_mut().zip(losses) {
            *acc += l;
        }
        self.rounds += 1;
        Ok(())
    }

    pub fn rounds(&self) -> u64 {
        self.rounds
    }

    pub fn expected_loss(&self) -> f64 {
        self.expected_loss
    }

    pub fn realized_loss(&self) -> f64 {
        self.realized_loss
    }

    pub fn per_arm_loss(&self) -> &[f64] {
        &self.per_arm
    }

    pub fn best_arm_loss(&self) -> f64 {
        self.per_arm.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `sum_s <pi_s, l_s> - min_i sum_s l_{s,i}` after exactly `t` rounds.
    pub fn pseudo_regret(&self, t: u64) -> Result<f64, LedgerError> {
        self.check_round(t)?;
        Ok(self.current_pseudo_regret())
    }

    /// `sum_s l_{s,A_s} - min_i sum_s l_{s,i}` after exactly `t` rounds.
    pub fn realized_regret(&self, t: u64) -> Result<f64, LedgerError> {
        self.check_round(t)?;
        Ok(self.current_realized_regret())
    }

    pub fn current_pseudo_regret(&self) -> f64 {
        if self.rounds == 0 {
            return 0.0;
        }
        self.expected_loss - self.best_arm_loss()
    }

    pub fn current_realized_regret(&self) -> f64 {
        if self.rounds == 0 {
            return 0.0;
        }
        self.realized_loss - self.best_arm_loss()
    }

    fn check_round(&self, t: u64) -> Result<(), LedgerError> {
        if t != self.rounds {
            return Err(LedgerError::RoundMismatch {
                requested: t,
                recorded: self.rounds,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn identical_losses_give_zero_regret() {
        let mut ledger = RegretLedger::new(3);
        let mut rng = RngStream::new(1, 0);
        for _ in 0..50 {
            let l = rng.next_uniform();
            ledger.record(&[0.2, 0.3, 0.5], &[l, l, l], 1).unwrap();
        }
        assert!(ledger.pseudo_regret(50).unwrap().abs() <= 1e-12);
    }

    #[test]
    fn single_round_arithmetic() {
        let mut ledger = RegretLedger::new(2);
        ledger.record(&[0.5, 0.5], &[0.0, 1.0], 1).unwrap();
        assert_eq!(ledger.pseudo_regret(1).unwrap(), 0.5);
        assert_eq!(ledger.realized_regret(1).unwrap(), 1.0);
    }

    #[test]
    fn matches_double_loop_oracle() {
        let mut rng = RngStream::new(99, 0);
        let rows = 5;
        let k = 3;
        let losses: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..k).map(|_| rng.next_uniform()).collect())
            .collect();
        let plays: Vec<Vec<f64>> = (0..rows)
            .map(|_| {
                let raw: Vec<f64> = (0..k).map(|_| 0.1 + rng.next_uniform()).collect();
                let s: f64 = raw.iter().sum();
                raw.iter().map(|x| x / s).collect()
            })
            .collect();

        let mut ledger = RegretLedger::new(k);
        for t in 0..rows {
            ledger.record(&plays[t], &losses[t], 0).unwrap();
        }

        let mut played = 0.0;
        for t in 0..rows {
            for i in 0..k {
                played += plays[t][i] * losses[t][i];
            }
        }
        let mut best = f64::INFINITY;
        for i in 0..k {
            let mut total = 0.0;
            for row in &losses {
                total += row[i];
            }
            best = best.min(total);
        }
        let got = ledger.pseudo_regret(rows as u64).unwrap();
        assert!((got - (played - best)).abs() <= 1e-9);
    }

    #[test]
    fn querying_a_round_not_held_is_an_error() {
        let mut ledger = RegretLedger::new(2);
        ledger.record(&[0.5, 0.5], &[0.0, 1.0], 0).unwrap();
        assert!(matches!(
            ledger.pseudo_regret(2),
            Err(LedgerError::RoundMismatch {
                requested: 2,
                recorded: 1
            })
        ));
        assert_eq!(RegretLedger::new(2).pseudo_regret(0).unwrap(), 0.0);
    }
}

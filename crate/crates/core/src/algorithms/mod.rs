//! Update rules: WSU-UX (plain and loss-biased), LB-Prod, TS-Prod, the
//! dual-stabilized 1/2-Tsallis OMD reference, and an Exp3 baseline.

mod exp3;
mod lb_prod;
mod ts_omd;
mod ts_prod;
mod wsu_ux;

pub use exp3::{exp3_tuned_eta, Exp3, EXP3_WEIGHT_FLOOR};
pub use lb_prod::{lb_tuned_eta, LbProd};
pub use ts_omd::{TsOmdDs, TsOmdSchedule, TsOmdStep, STEP_MAGNITUDE_BOUND};
pub use ts_prod::{ts_schedule, TsProd, TsProdConfig, TsSchedule};
pub use wsu_ux::{WsuUx, WsuUxParams};

use serde::{Deserialize, Serialize};

use crate::algorithm::{AlgorithmError, BanditAlgorithm};
use crate::simplex::{BanditFeedback, LossRange, SimplexDistribution};

/// Any of the algorithms above, behind one concrete type.
#[derive(Debug, Clone)]
pub enum AnyAlgorithm {
    Exp3(Exp3),
    WsuUx(WsuUx),
    LbProd(LbProd),
    TsProd(TsProd),
    TsOmdDs(TsOmdDs),
}

macro_rules! dispatch {
    ($self:expr, $alg:ident => $body:expr) => {
        match $self {
            AnyAlgorithm::Exp3($alg) => $body,
            AnyAlgorithm::WsuUx($alg) => $body,
            AnyAlgorithm::LbProd($alg) => $body,
            AnyAlgorithm::TsProd($alg) => $body,
            AnyAlgorithm::TsOmdDs($alg) => $body,
        }
    };
}

impl BanditAlgorithm for AnyAlgorithm {
    fn name(&self) -> &'static str {
        dispatch!(self, a => a.name())
    }

    fn num_arms(&self) -> usize {
        dispatch!(self, a => a.num_arms())
    }

    fn round(&self) -> u64 {
        dispatch!(self, a => a.round())
    }

    fn distribution(&self) -> &SimplexDistribution {
        dispatch!(self, a => a.distribution())
    }

    fn weights(&self) -> &SimplexDistribution {
        dispatch!(self, a => a.weights())
    }

    fn loss_range(&self) -> LossRange {
        dispatch!(self, a => a.loss_range())
    }

    fn propose(&self, feedback: &BanditFeedback) -> Result<Vec<f64>, AlgorithmError> {
        dispatch!(self, a => a.propose(feedback))
    }

    fn commit(&mut self, next: SimplexDistribution) {
        dispatch!(self, a => a.commit(next))
    }

    fn update(&mut self, feedback: &BanditFeedback) -> Result<(), AlgorithmError> {
        dispatch!(self, a => a.update(feedback))
    }
}

/// Algorithm selection as written in experiment configs. Omitted step sizes
/// are tuned from `(K, T)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    /// Tuned: `eta = sqrt(2 ln K / (K T))`.
    Exp3 {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta: Option<f64>,
    },
    /// Unbiased WSU-UX. Tuned: the `T^{2/3}` balance of
    /// [`WsuUxParams::tuned_cube_root`].
    WsuUx {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<f64>,
    },
    /// Loss-biased WSU-UX. Tuned: [`WsuUxParams::tuned_biased`].
    Bwsu {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gamma: Option<f64>,
    },
    /// Tuned: [`lb_tuned_eta`].
    LbProd {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        eta: Option<f64>,
    },
    /// `schedule_offset` defaults to `K`.
    TsProd {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        schedule_offset: Option<f64>,
    },
    TsOmdDs {},
}

impl AlgorithmSpec {
    pub fn id(&self) -> &'static str {
        match self {
            AlgorithmSpec::Exp3 { .. } => "exp3",
            AlgorithmSpec::WsuUx { .. } => "wsu-ux",
            AlgorithmSpec::Bwsu { .. } => "bwsu",
            AlgorithmSpec::LbProd { .. } => "lb-prod",
            AlgorithmSpec::TsProd { .. } => "ts-prod",
            AlgorithmSpec::TsOmdDs {} => "ts-omd-ds",
        }
    }

    /// Loss range the algorithm accepts.
    pub fn loss_range(&self) -> LossRange {
        match self {
            AlgorithmSpec::LbProd { .. } => LossRange::Signed,
            _ => LossRange::Unit,
        }
    }

    /// Builds a fresh learner for `num_arms` experts and horizon `horizon`,
    /// checking every parameter precondition.
    pub fn build(&self, num_arms: usize, horizon: u64) -> Result<AnyAlgorithm, AlgorithmError> {
        Ok(match *self {
            AlgorithmSpec::Exp3 { eta } => AnyAlgorithm::Exp3(match eta {
                Some(eta) => Exp3::new(num_arms, eta)?,
                None => Exp3::tuned(num_arms, horizon)?,
            }),
            AlgorithmSpec::WsuUx { eta, gamma } => {
                let params = match (eta, gamma) {
                    (Some(eta), Some(gamma)) => WsuUxParams::new(eta, gamma, false),
                    (None, None) => WsuUxParams::tuned_cube_root(num_arms, horizon)?,
                    _ => return Err(both_or_neither()),
                };
                AnyAlgorithm::WsuUx(WsuUx::new(num_arms, params)?)
            }
            AlgorithmSpec::Bwsu { eta, gamma } => {
                let params = match (eta, gamma) {
                    (Some(eta), Some(gamma)) => WsuUxParams::new(eta, gamma, true),
                    (None, None) => WsuUxParams::tuned_biased(num_arms, horizon)?,
                    _ => return Err(both_or_neither()),
                };
                AnyAlgorithm::WsuUx(WsuUx::new(num_arms, params)?)
            }
            AlgorithmSpec::LbProd { eta } => AnyAlgorithm::LbProd(match eta {
                Some(eta) => LbProd::new(num_arms, eta)?,
                None => LbProd::tuned(num_arms, horizon)?,
            }),
            AlgorithmSpec::TsProd { schedule_offset } => {
                let offset = schedule_offset.unwrap_or(num_arms as f64);
                AnyAlgorithm::TsProd(TsProd::new(num_arms, TsProdConfig::with_offset(offset))?)
            }
            AlgorithmSpec::TsOmdDs {} => AnyAlgorithm::TsOmdDs(TsOmdDs::new(num_arms)?),
        })
    }
}

fn both_or_neither() -> AlgorithmError {
    AlgorithmError::Config("give both eta and gamma, or neither to use the tuned values".into())
}

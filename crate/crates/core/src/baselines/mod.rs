//! Comparison algorithms trained on the same environment and metrics
//! pipeline as the federated method.

pub mod cdrl;
pub mod ddqn;
pub mod fedavg;
pub mod independent;

use serde::{Deserialize, Serialize};

pub use cdrl::{split_joint, train_cdrl, CentralizedTrainer};
pub use ddqn::{ddqn_target, DdqnLearner, Experience};
pub use fedavg::fedavg;
pub use independent::{train_fmarl_avg, train_imarl, IndependentTrainer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BaselineKind {
    /// One DDQN over the global state and joint actions.
    Cdrl,
    /// One DDQN per vehicle, all trained on the global reward.
    Imarl,
    /// Independent DDQNs with periodic weight averaging.
    FmarlAvg,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FedAvgConfig {
    /// Episodes between averaging rounds.
    pub period: usize,
}

impl Default for FedAvgConfig {
    fn default() -> Self {
        Self { period: 5 }
    }
}

impl FedAvgConfig {
    /// A period that never triggers within any feasible run.
    pub const NEVER: FedAvgConfig = FedAvgConfig { period: usize::MAX };

    pub fn validate(&self) -> Result<()> {
        if self.period < 1 {
            return Err(Error::config("fedavg period must be at least 1"));
        }
        Ok(())
    }
}

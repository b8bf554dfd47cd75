//! Vehicular world and its decentralized partially observable interface.

pub mod channel;
pub mod config;
pub mod layout;
pub mod mobility;
pub mod observation;
pub mod toy;
pub mod world;

pub use channel::{achievable_rate, path_loss_db, sample_channel_gain};
pub use config::EnvConfig;
pub use layout::{Position, Rsu, RsuLayout, Side};
pub use observation::{observable_rsus, observe, Observation};
pub use toy::MatrixGame;
pub use world::{
    check_constraints, handover_indicator, utility, AgentAction, StepResult, Vehicle, VehicularEnv, Violation,
    WorldState,
};

use crate::error::Result;

/// Per-slot summary every learner sees, independent of the concrete world.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub reward: f64,
    /// Mean utility over agents without penalty.
    pub pat: f64,
    pub mean_rate: f64,
    /// Handovers summed over agents.
    pub handovers: f64,
    pub mean_tx_power: f64,
    pub penalized: bool,
    /// Normalized next inputs, one per agent.
    pub next_inputs: Vec<Vec<f64>>,
    pub terminal: bool,
}

/// Multi-agent environment with flat discrete per-agent actions and a shared
/// scalar reward.
pub trait MultiAgentEnv {
    fn num_agents(&self) -> usize;
    fn obs_dim(&self) -> usize;
    fn num_actions(&self) -> usize;
    fn horizon(&self) -> usize;
    /// Start `episode` and return the normalized inputs of every agent.
    fn reset_episode(&mut self, episode: u64) -> Vec<Vec<f64>>;
    fn step_joint(&mut self, actions: &[usize]) -> Result<StepReport>;
}

impl MultiAgentEnv for VehicularEnv {
    fn num_agents(&self) -> usize {
        self.config().num_vehicles
    }

    fn obs_dim(&self) -> usize {
        self.config().obs_dim()
    }

    fn num_actions(&self) -> usize {
        self.config().num_actions()
    }

    fn horizon(&self) -> usize {
        self.config().horizon
    }

    fn reset_episode(&mut self, episode: u64) -> Vec<Vec<f64>> {
        self.reset(episode);
        self.inputs()
    }

    fn step_joint(&mut self, actions: &[usize]) -> Result<StepReport> {
        let acts = actions
            .iter()
            .map(|&a| AgentAction::from_index(a, self.config()))
            .collect::<Result<Vec<_>>>()?;
        let res = self.step(&acts)?;
        let k = res.rates.len() as f64;
        Ok(StepReport {
            reward: res.reward,
            pat: res.pat,
            mean_rate: res.rates.iter().sum::<f64>() / k,
            handovers: res.ho_flags.iter().map(|&h| h as f64).sum(),
            mean_tx_power: res.tx_power_w.iter().sum::<f64>() / k,
            penalized: !res.violations.is_empty(),
            next_inputs: self.inputs(),
            terminal: res.terminal,
        })
    }
}

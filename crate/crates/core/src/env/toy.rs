//! Single-slot cooperative matrix game used to check that learners recover
//! the best joint action of a fully enumerable reward table.

use super::{MultiAgentEnv, StepReport};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MatrixGame {
    num_actions: usize,
    /// `rewards[a0 * num_actions + a1]`.
    rewards: Vec<f64>,
    inputs: Vec<Vec<f64>>,
}

impl MatrixGame {
    pub fn new(num_actions: usize, rewards: Vec<f64>, obs_dim: usize) -> Result<Self> {
        if rewards.len() != num_actions * num_actions {
            return Err(Error::shape(format!(
                "reward table has {} entries for {num_actions} actions",
                rewards.len()
            )));
        }
        let inputs = (0..2)
            .map(|agent| (0..obs_dim).map(|i| 0.25 + 0.5 * ((i + agent) % 2) as f64).collect())
            .collect();
        Ok(Self {
            num_actions,
            rewards,
            inputs,
        })
    }

    /// Reward-maximizing joint action by exhaustive enumeration.
    pub fn best_joint_action(&self) -> (usize, usize) {
        let best = (0..self.rewards.len())
            .max_by(|&a, &b| self.rewards[a].total_cmp(&self.rewards[b]).then(b.cmp(&a)))
            .unwrap_or(0);
        (best / self.num_actions, best % self.num_actions)
    }

    pub fn reward(&self, a0: usize, a1: usize) -> f64 {
        self.rewards[a0 * self.num_actions + a1]
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }
}

impl MultiAgentEnv for MatrixGame {
    fn num_agents(&self) -> usize {
        2
    }

    fn obs_dim(&self) -> usize {
        self.inputs[0].len()
    }

    fn num_actions(&self) -> usize {
        self.num_actions
    }

    fn horizon(&self) -> usize {
        1
    }

    fn reset_episode(&mut self, _episode: u64) -> Vec<Vec<f64>> {
        self.inputs.clone()
    }

    fn step_joint(&mut self, actions: &[usize]) -> Result<StepReport> {
        match actions {
            [a0, a1] if *a0 < self.num_actions && *a1 < self.num_actions => {
                let reward = self.reward(*a0, *a1);
                Ok(StepReport {
                    reward,
                    pat: reward,
                    mean_rate: 0.0,
                    handovers: 0.0,
                    mean_tx_power: 0.0,
                    penalized: false,
                    next_inputs: self.inputs.clone(),
                    terminal: true,
                })
            }
            _ => Err(Error::InvalidAction(format!("{actions:?}"))),
        }
    }
}

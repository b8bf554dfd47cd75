//! Double DQN learner used by every baseline.

use serde::{Deserialize, Serialize};

use crate::agents::{argmax, epsilon_greedy, ReplayBuffer, TrainerConfig};
use crate::error::{Error, Result};
use crate::nn::{clip_global_norm, DenseNet, Matrix};
use crate::rng::StreamRng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experience {
    pub obs: Vec<f64>,
    pub action: usize,
    pub reward: f64,
    pub next_obs: Vec<f64>,
    pub terminal: bool,
}

/// `r` if terminal, else `r + gamma * target(o')[argmax main(o')]`.
pub fn ddqn_target(
    reward: f64,
    next_obs: &[f64],
    main: &DenseNet,
    target: &DenseNet,
    gamma: f64,
    terminal: bool,
) -> Result<f64> {
    if terminal {
        return Ok(reward);
    }
    let best = argmax(&main.forward(next_obs)?);
    Ok(reward + gamma * target.forward(next_obs)?[best])
}

#[derive(Debug, Clone)]
pub struct DdqnLearner {
    pub net: DenseNet,
    pub target: DenseNet,
    replay: ReplayBuffer<Experience>,
    replay_rng: StreamRng,
    train_steps: u64,
}

impl DdqnLearner {
    pub fn new(
        obs_dim: usize,
        num_actions: usize,
        cfg: &TrainerConfig,
        init_rng: &mut StreamRng,
        replay_rng: StreamRng,
    ) -> Result<Self> {
        let net = DenseNet::init(&cfg.local_dims(obs_dim, num_actions), cfg.activation, init_rng)?;
        Ok(Self {
            target: net.clone(),
            net,
            replay: ReplayBuffer::new(cfg.replay_capacity),
            replay_rng,
            train_steps: 0,
        })
    }

    pub fn act(&self, obs: &[f64], epsilon: f64, rng: &mut StreamRng) -> Result<usize> {
        Ok(epsilon_greedy(&self.net.forward(obs)?, epsilon, rng))
    }

    pub fn remember(&mut self, exp: Experience) {
        self.replay.push(exp);
    }

    pub fn replay(&self) -> &ReplayBuffer<Experience> {
        &self.replay
    }

    pub fn clear_replay(&mut self) {
        self.replay.clear();
    }

    pub fn train_steps(&self) -> u64 {
        self.train_steps
    }

    /// One minibatch step if enough experience is stored. Returns the loss.
    pub fn learn(&mut self, cfg: &TrainerConfig, lr: f64) -> Result<Option<f64>> {
        if self.replay.len() < cfg.train_start() {
            return Ok(None);
        }
        let indices = self.replay.sample_indices(cfg.batch_size, &mut self.replay_rng);
        let items: Vec<&Experience> = indices.iter().map(|&i| self.replay.get(i)).collect();
        let obs = Matrix::from_rows(&items.iter().map(|e| e.obs.as_slice()).collect::<Vec<_>>());
        let next = Matrix::from_rows(&items.iter().map(|e| e.next_obs.as_slice()).collect::<Vec<_>>());

        let next_main = self.net.forward_batch(&next)?;
        let next_target = self.target.forward_batch(&next)?;
        let (q, cache) = self.net.forward_cached(&obs)?;
        let n = items.len();
        let mut grad = Matrix::zeros(n, q.cols());
        let mut loss = 0.0;
        for (j, e) in items.iter().enumerate() {
            let y = if e.terminal {
                e.reward
            } else {
                e.reward + cfg.gamma * next_target.get(j, argmax(next_main.row(j)))
            };
            let err = q.get(j, e.action) - y;
            loss += err * err;
            grad.set(j, e.action, 2.0 * err / n as f64);
        }
        loss /= n as f64;
        if !loss.is_finite() {
            return Err(Error::NonFinite("DDQN loss"));
        }
        let (mut grads, _) = self.net.backward(&cache, &grad)?;
        clip_global_norm(&mut [&mut grads], cfg.grad_clip);
        self.net.sgd_apply(&grads, lr)?;
        self.train_steps += 1;
        if self.train_steps % cfg.target_sync_period == 0 {
            self.net.copy_into(&mut self.target)?;
        }
        Ok(Some(loss))
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nn::{Activation, LinearSchedule};

/// How much of a local Q-vector an agent shares with its peer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SharingMode {
    /// The full noised Q-vector; the federated network scores joint actions.
    #[default]
    Vector,
    /// Only the noised value at the peer's own greedy/explored action; the
    /// federated network scores the sharer's own actions.
    Scalar,
}

/// Learning hyperparameters shared by the federated trainer and baselines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainerConfig {
    pub gamma: f64,
    /// Exploration probability at episode 1.
    pub epsilon: f64,
    /// Exploration probability after `epsilon_decay_episodes`; `None` keeps
    /// `epsilon` constant.
    pub epsilon_end: Option<f64>,
    pub epsilon_decay_episodes: usize,
    pub batch_size: usize,
    /// Standard deviation of the Gaussian noise added to shared Q-values.
    pub dp_sigma: f64,
    /// When false, shared Q-values are passed through unchanged.
    pub encryption: bool,
    pub sharing: SharingMode,
    pub replay_capacity: usize,
    /// Minimum stored transitions before training; defaults to `batch_size`.
    pub train_start: Option<usize>,
    /// Training steps between target-network refreshes.
    pub target_sync_period: u64,
    pub episodes: usize,
    pub lr_start: f64,
    pub lr_end: f64,
    pub lr_decay_episodes: usize,
    /// Hidden layer widths of the local Q-networks.
    pub hidden: Vec<usize>,
    /// Hidden layer widths of the federated network.
    pub mlp_hidden: Vec<usize>,
    pub activation: Activation,
    /// Global gradient-norm bound per update; `inf` disables clipping.
    pub grad_clip: f64,
    pub clear_replay_each_episode: bool,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            gamma: 0.9,
            epsilon: 0.1,
            epsilon_end: None,
            epsilon_decay_episodes: 1,
            batch_size: 32,
            dp_sigma: 1.0,
            encryption: true,
            sharing: SharingMode::Vector,
            replay_capacity: 20_000,
            train_start: None,
            target_sync_period: 200,
            episodes: 500,
            lr_start: 0.01,
            lr_end: 0.001,
            lr_decay_episodes: 250,
            hidden: vec![80, 80, 80],
            mlp_hidden: vec![80, 80],
            activation: Activation::Relu,
            grad_clip: 10.0,
            clear_replay_each_episode: false,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::config(format!("{name} = {v} outside [0, 1]")))
            }
        };
        unit("gamma", self.gamma)?;
        unit("epsilon", self.epsilon)?;
        if let Some(e) = self.epsilon_end {
            unit("epsilon_end", e)?;
        }
        if self.batch_size < 1 {
            return Err(Error::config("batch_size must be at least 1"));
        }
        if !(self.dp_sigma >= 0.0 && self.dp_sigma.is_finite()) {
            return Err(Error::config("dp_sigma must be finite and non-negative"));
        }
        if self.replay_capacity < self.batch_size {
            return Err(Error::config("replay_capacity must hold at least one minibatch"));
        }
        if self.target_sync_period < 1 || self.episodes < 1 || self.epsilon_decay_episodes < 1 {
            return Err(Error::config(
                "target_sync_period, episodes and epsilon_decay_episodes must be positive",
            ));
        }
        if self.hidden.contains(&0) || self.mlp_hidden.contains(&0) {
            return Err(Error::config("hidden layer widths must be positive"));
        }
        if !(self.grad_clip > 0.0) {
            return Err(Error::config("grad_clip must be positive (inf disables it)"));
        }
        self.lr_schedule().validate_lr()
    }

    pub fn lr_schedule(&self) -> LinearSchedule {
        LinearSchedule::new(self.lr_start, self.lr_end, self.lr_decay_episodes)
    }

    pub fn epsilon_schedule(&self) -> LinearSchedule {
        LinearSchedule::new(
            self.epsilon,
            self.epsilon_end.unwrap_or(self.epsilon),
            self.epsilon_decay_episodes,
        )
    }

    /// Noise scale actually applied to shared values.
    pub fn effective_sigma(&self) -> f64 {
        if self.encryption {
            self.dp_sigma
        } else {
            0.0
        }
    }

    pub fn train_start(&self) -> usize {
        self.train_start.unwrap_or(self.batch_size).max(self.batch_size)
    }

    /// Layer sizes of a Q-network mapping `input` features to `output` values.
    pub fn local_dims(&self, input: usize, output: usize) -> Vec<usize> {
        std::iter::once(input)
            .chain(self.hidden.iter().copied())
            .chain(std::iter::once(output))
            .collect()
    }

    pub fn mlp_dims(&self, input: usize, output: usize) -> Vec<usize> {
        std::iter::once(input)
            .chain(self.mlp_hidden.iter().copied())
            .chain(std::iter::once(output))
            .collect()
    }
}

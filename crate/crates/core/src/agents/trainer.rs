//! The federated training loop: per slot, β shares its noised Q-values, α
//! picks the joint action through the federated network, both execute, the
//! slot is stored, and one α update followed by one β update runs on a
//! replayed minibatch.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{SharingMode, TrainerConfig};
use super::federated::{FederatedAgentPair, FederatedBatch, JointTransition, Side};
use super::policy::{decompose_joint, epsilon_greedy};
use super::replay::ReplayBuffer;
use crate::env::MultiAgentEnv;
use crate::error::{Error, Result};
use crate::metrics::{EpisodeAccumulator, EpisodeRecord};
use crate::nn::{read_net, write_net, DenseNet};
use crate::rng::{stream, Stream, StreamRng};

/// Episode ids used by greedy evaluation start here so they never reuse a
/// training episode's world.
pub const EVAL_EPISODE_OFFSET: u64 = 1 << 32;

/// Counts from the optional encryption-boundary audit.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolationAudit {
    /// Updates whose opposite local network was fingerprinted.
    pub checked_updates: u64,
    /// Updates that changed the opposite local network.
    pub breaches: u64,
}

#[derive(Debug, Clone)]
pub struct FederatedTrainer {
    cfg: TrainerConfig,
    seed: u64,
    pair: FederatedAgentPair,
    replay: ReplayBuffer<JointTransition>,
    explore_rng: StreamRng,
    replay_rng: StreamRng,
    noise_rng: StreamRng,
    train_steps: u64,
    episodes_done: usize,
    /// Fingerprint the opposite local network around every update.
    pub audit_isolation: bool,
    audit: IsolationAudit,
}

#[derive(Serialize, Deserialize)]
struct TrainerState {
    format: u32,
    config: TrainerConfig,
    seed: u64,
    train_steps: u64,
    episodes_done: usize,
    explore_rng: StreamRng,
    replay_rng: StreamRng,
    noise_rng: StreamRng,
    replay: ReplayBuffer<JointTransition>,
}

const NET_FILES: [&str; 5] = ["alpha", "alpha_target", "beta", "mlp", "mlp_target"];

impl FederatedTrainer {
    pub fn new<E: MultiAgentEnv + ?Sized>(env: &E, cfg: TrainerConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        if env.num_agents() != 2 {
            return Err(Error::config(format!(
                "the federated trainer drives one α/β pair, environment has {} agents",
                env.num_agents()
            )));
        }
        let pair = FederatedAgentPair::new(
            env.obs_dim(),
            env.num_actions(),
            &cfg,
            &mut stream(seed, Stream::Init, 0),
        )?;
        Ok(Self {
            replay: ReplayBuffer::new(cfg.replay_capacity),
            explore_rng: stream(seed, Stream::Exploration, 0),
            replay_rng: stream(seed, Stream::Replay, 0),
            noise_rng: stream(seed, Stream::Noise, 0),
            cfg,
            seed,
            pair,
            train_steps: 0,
            episodes_done: 0,
            audit_isolation: false,
            audit: IsolationAudit::default(),
        })
    }

    pub fn config(&self) -> &TrainerConfig {
        &self.cfg
    }

    pub fn pair(&self) -> &FederatedAgentPair {
        &self.pair
    }

    pub fn pair_mut(&mut self) -> &mut FederatedAgentPair {
        &mut self.pair
    }

    pub fn replay(&self) -> &ReplayBuffer<JointTransition> {
        &self.replay
    }

    pub fn train_steps(&self) -> u64 {
        self.train_steps
    }

    pub fn episodes_done(&self) -> usize {
        self.episodes_done
    }

    pub fn audit(&self) -> IsolationAudit {
        self.audit
    }

    /// Joint action for the current inputs at exploration rate `epsilon`.
    pub fn select_actions(&mut self, inputs: &[Vec<f64>], epsilon: f64) -> Result<(usize, usize)> {
        let sigma = self.cfg.effective_sigma();
        let q_beta = self.pair.local_q(Side::Beta, &inputs[1])?;
        let explored_beta = epsilon_greedy(&q_beta, epsilon, &mut self.explore_rng);
        let shared_beta = self.pair.share(&q_beta, explored_beta, sigma, &mut self.noise_rng);
        let q_alpha = self.pair.local_q(Side::Alpha, &inputs[0])?;
        let joint = self.pair.joint_q(&q_alpha, &shared_beta)?;
        let chosen = epsilon_greedy(&joint, epsilon, &mut self.explore_rng);
        match self.pair.sharing() {
            SharingMode::Vector => decompose_joint(chosen, self.pair.num_actions()),
            SharingMode::Scalar => Ok((chosen, explored_beta)),
        }
    }

    fn learn(&mut self, lr: f64) -> Result<()> {
        let indices = self.replay.sample_indices(self.cfg.batch_size, &mut self.replay_rng);
        let batch = FederatedBatch::gather(&self.replay, &indices);
        let sigma = self.cfg.effective_sigma();
        let targets = self
            .pair
            .compute_target(&batch, self.cfg.gamma, sigma, &mut self.noise_rng)?;
        let clip = self.cfg.grad_clip;

        let beta_before = self.audit_isolation.then(|| self.pair.beta.fingerprint());
        self.pair
            .train_step_alpha(&batch, &targets, lr, sigma, clip, &mut self.noise_rng)?;
        if let Some(before) = beta_before {
            self.record_audit(before == self.pair.beta.fingerprint());
        }
        let alpha_before = self.audit_isolation.then(|| self.pair.alpha.fingerprint());
        self.pair
            .train_step_beta(&batch, &targets, lr, sigma, clip, &mut self.noise_rng)?;
        if let Some(before) = alpha_before {
            self.record_audit(before == self.pair.alpha.fingerprint());
        }

        self.train_steps += 1;
        if self.train_steps % self.cfg.target_sync_period == 0 {
            self.pair.sync_targets()?;
        }
        Ok(())
    }

    fn record_audit(&mut self, untouched: bool) {
        self.audit.checked_updates += 1;
        self.audit.breaches += (!untouched) as u64;
    }

    /// Run one training episode (1-based `episode`) and return its metrics.
    pub fn run_episode<E: MultiAgentEnv + ?Sized>(&mut self, env: &mut E, episode: usize) -> Result<EpisodeRecord> {
        let epsilon = self.cfg.epsilon_schedule().at(episode);
        let lr = self.cfg.lr_schedule().at(episode);
        if self.cfg.clear_replay_each_episode {
            self.replay.clear();
        }
        let mut inputs = env.reset_episode(episode as u64);
        let mut acc = EpisodeAccumulator::default();
        for _ in 0..env.horizon() {
            let (a_alpha, a_beta) = self.select_actions(&inputs, epsilon)?;
            let report = env.step_joint(&[a_alpha, a_beta])?;
            acc.push(&report);
            let next = report.next_inputs;
            self.replay.push(JointTransition {
                obs: [inputs[0].clone(), inputs[1].clone()],
                actions: [a_alpha, a_beta],
                reward: report.reward,
                next_obs: [next[0].clone(), next[1].clone()],
                terminal: report.terminal,
            });
            if self.replay.len() >= self.cfg.train_start() {
                self.learn(lr)?;
            }
            inputs = next;
            if report.terminal {
                break;
            }
        }
        self.episodes_done = episode;
        Ok(acc.finish(episode, env.num_agents(), epsilon, lr))
    }

    /// Continue training up to `cfg.episodes`, calling `on_episode` after each.
    pub fn train<E, F>(&mut self, env: &mut E, mut on_episode: F) -> Result<Vec<EpisodeRecord>>
    where
        E: MultiAgentEnv + ?Sized,
        F: FnMut(&EpisodeRecord),
    {
        let mut records = Vec::with_capacity(self.cfg.episodes.saturating_sub(self.episodes_done));
        for episode in self.episodes_done + 1..=self.cfg.episodes {
            let record = self.run_episode(env, episode)?;
            on_episode(&record);
            records.push(record);
        }
        Ok(records)
    }

    /// Greedy execution: no exploration, no learning, sharing still noised.
    pub fn evaluate<E: MultiAgentEnv + ?Sized>(&mut self, env: &mut E, episodes: usize) -> Result<Vec<EpisodeRecord>> {
        let mut records = Vec::with_capacity(episodes);
        for i in 0..episodes {
            let mut inputs = env.reset_episode(EVAL_EPISODE_OFFSET + i as u64);
            let mut acc = EpisodeAccumulator::default();
            for _ in 0..env.horizon() {
                let (a_alpha, a_beta) = self.select_actions(&inputs, 0.0)?;
                let report = env.step_joint(&[a_alpha, a_beta])?;
                acc.push(&report);
                inputs = report.next_inputs;
                if report.terminal {
                    break;
                }
            }
            records.push(acc.finish(i + 1, env.num_agents(), 0.0, 0.0));
        }
        Ok(records)
    }

    /// Write the five networks and the trainer state into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let nets = [
            &self.pair.alpha,
            &self.pair.alpha_target,
            &self.pair.beta,
            &self.pair.mlp,
            &self.pair.mlp_target,
        ];
        for (name, net) in NET_FILES.iter().zip(nets) {
            let path = dir.join(format!("{name}.jqnn"));
            let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
            write_net(net, std::io::BufWriter::new(file))?;
        }
        let state = TrainerState {
            format: 1,
            config: self.cfg.clone(),
            seed: self.seed,
            train_steps: self.train_steps,
            episodes_done: self.episodes_done,
            explore_rng: self.explore_rng.clone(),
            replay_rng: self.replay_rng.clone(),
            noise_rng: self.noise_rng.clone(),
            replay: self.replay.clone(),
        };
        let path = dir.join("trainer.json");
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        serde_json::to_writer(std::io::BufWriter::new(file), &state)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join("trainer.json");
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let state: TrainerState = serde_json::from_str(&text)?;
        if state.format != 1 {
            return Err(Error::Checkpoint(format!(
                "unsupported trainer state format {}",
                state.format
            )));
        }
        let mut nets: Vec<DenseNet> = Vec::with_capacity(5);
        for name in NET_FILES {
            let path = dir.join(format!("{name}.jqnn"));
            let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
            nets.push(read_net(bytes.as_slice())?);
        }
        let mut it = nets.into_iter();
        let mut next = || it.next().expect("five networks");
        let pair = FederatedAgentPair::from_parts(next(), next(), next(), next(), next(), state.config.sharing)?;
        Ok(Self {
            cfg: state.config,
            seed: state.seed,
            pair,
            replay: state.replay,
            explore_rng: state.explore_rng,
            replay_rng: state.replay_rng,
            noise_rng: state.noise_rng,
            train_steps: state.train_steps,
            episodes_done: state.episodes_done,
            audit_isolation: false,
            audit: IsolationAudit::default(),
        })
    }
}

/// Outcome of a complete training run.
#[derive(Debug, Clone)]
pub struct TrainingRun {
    pub trainer: FederatedTrainer,
    pub records: Vec<EpisodeRecord>,
}

/// Train a fresh α/β pair on `env` for `cfg.episodes` episodes.
pub fn run_training<E: MultiAgentEnv + ?Sized>(env: &mut E, cfg: &TrainerConfig, seed: u64) -> Result<TrainingRun> {
    let mut trainer = FederatedTrainer::new(env, cfg.clone(), seed)?;
    let records = trainer.train(env, |_| {})?;
    Ok(TrainingRun { trainer, records })
}

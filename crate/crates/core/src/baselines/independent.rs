//! Independent DDQN learners, optionally with periodic federated averaging
//! of their networks.

use super::ddqn::{DdqnLearner, Experience};
use super::fedavg::fedavg;
use super::FedAvgConfig;
use crate::agents::TrainerConfig;
use crate::env::MultiAgentEnv;
use crate::error::Result;
use crate::metrics::{EpisodeAccumulator, EpisodeRecord};
use crate::rng::{stream, Stream, StreamRng};

#[derive(Debug, Clone)]
pub struct IndependentTrainer {
    cfg: TrainerConfig,
    pub learners: Vec<DdqnLearner>,
    explore_rngs: Vec<StreamRng>,
    fedavg: Option<FedAvgConfig>,
    episodes_done: usize,
}

impl IndependentTrainer {
    /// `fedavg = None` gives plain independent learners.
    pub fn new<E: MultiAgentEnv + ?Sized>(
        env: &E,
        cfg: TrainerConfig,
        fedavg: Option<FedAvgConfig>,
        seed: u64,
    ) -> Result<Self> {
        cfg.validate()?;
        if let Some(f) = &fedavg {
            f.validate()?;
        }
        let learners = (0..env.num_agents())
            .map(|k| {
                DdqnLearner::new(
                    env.obs_dim(),
                    env.num_actions(),
                    &cfg,
                    &mut stream(seed, Stream::Init, k as u64),
                    stream(seed, Stream::Replay, k as u64),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            explore_rngs: (0..env.num_agents())
                .map(|k| stream(seed, Stream::Exploration, k as u64))
                .collect(),
            cfg,
            learners,
            fedavg,
            episodes_done: 0,
        })
    }

    pub fn greedy_actions(&mut self, inputs: &[Vec<f64>]) -> Result<Vec<usize>> {
        self.learners
            .iter()
            .zip(inputs)
            .zip(&mut self.explore_rngs)
            .map(|((l, obs), rng)| l.act(obs, 0.0, rng))
            .collect()
    }

    /// Replace every learner's main and target networks by their averages.
    pub fn average(&mut self) -> Result<()> {
        let main = fedavg(&self.learners.iter().map(|l| &l.net).collect::<Vec<_>>())?;
        let target = fedavg(&self.learners.iter().map(|l| &l.target).collect::<Vec<_>>())?;
        for l in &mut self.learners {
            l.net.clone_from(&main);
            l.target.clone_from(&target);
        }
        Ok(())
    }

    pub fn run_episode<E: MultiAgentEnv + ?Sized>(&mut self, env: &mut E, episode: usize) -> Result<EpisodeRecord> {
        let epsilon = self.cfg.epsilon_schedule().at(episode);
        let lr = self.cfg.lr_schedule().at(episode);
        if self.cfg.clear_replay_each_episode {
            self.learners.iter_mut().for_each(DdqnLearner::clear_replay);
        }
        let mut inputs = env.reset_episode(episode as u64);
        let mut acc = EpisodeAccumulator::default();
        for _ in 0..env.horizon() {
            let actions = self
                .learners
                .iter()
                .zip(&inputs)
                .zip(&mut self.explore_rngs)
                .map(|((l, obs), rng)| l.act(obs, epsilon, rng))
                .collect::<Result<Vec<_>>>()?;
            let report = env.step_joint(&actions)?;
            acc.push(&report);
            for (k, learner) in self.learners.iter_mut().enumerate() {
                // Every learner is trained on the shared global reward.
                learner.remember(Experience {
                    obs: inputs[k].clone(),
                    action: actions[k],
                    reward: report.reward,
                    next_obs: report.next_inputs[k].clone(),
                    terminal: report.terminal,
                });
                learner.learn(&self.cfg, lr)?;
            }
            inputs = report.next_inputs;
            if report.terminal {
                break;
            }
        }
        if let Some(f) = &self.fedavg {
            if episode % f.period == 0 {
                self.average()?;
            }
        }
        self.episodes_done = episode;
        Ok(acc.finish(episode, env.num_agents(), epsilon, lr))
    }
}

pub fn train_imarl<E: MultiAgentEnv + ?Sized>(
    env: &mut E,
    cfg: &TrainerConfig,
    seed: u64,
) -> Result<Vec<EpisodeRecord>> {
    let mut trainer = IndependentTrainer::new(env, cfg.clone(), None, seed)?;
    (1..=cfg.episodes).map(|e| trainer.run_episode(env, e)).collect()
}

pub fn train_fmarl_avg<E: MultiAgentEnv + ?Sized>(
    env: &mut E,
    cfg: &TrainerConfig,
    fedavg: &FedAvgConfig,
    seed: u64,
) -> Result<Vec<EpisodeRecord>> {
    let mut trainer = IndependentTrainer::new(env, cfg.clone(), Some(fedavg.clone()), seed)?;
    (1..=cfg.episodes).map(|e| trainer.run_episode(env, e)).collect()
}

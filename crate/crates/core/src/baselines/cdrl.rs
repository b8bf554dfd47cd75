//! Centralized DDQN: one learner over the concatenated observations of all
//! vehicles, acting in the joint action space.

use super::ddqn::{DdqnLearner, Experience};
use crate::agents::TrainerConfig;
use crate::env::MultiAgentEnv;
use crate::error::Result;
use crate::metrics::{EpisodeAccumulator, EpisodeRecord};
use crate::rng::{stream, Stream, StreamRng};

/// Split a joint index into per-agent actions, most significant first.
pub fn split_joint(mut joint: usize, num_actions: usize, num_agents: usize) -> Vec<usize> {
    let mut actions = vec![0; num_agents];
    for slot in actions.iter_mut().rev() {
        *slot = joint % num_actions;
        joint /= num_actions;
    }
    actions
}

pub fn concat_inputs(inputs: &[Vec<f64>]) -> Vec<f64> {
    inputs.concat()
}

#[derive(Debug, Clone)]
pub struct CentralizedTrainer {
    cfg: TrainerConfig,
    pub learner: DdqnLearner,
    explore_rng: StreamRng,
    episodes_done: usize,
}

impl CentralizedTrainer {
    pub fn new<E: MultiAgentEnv + ?Sized>(env: &E, cfg: TrainerConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let joint_actions = env.num_actions().pow(env.num_agents() as u32);
        let learner = DdqnLearner::new(
            env.obs_dim() * env.num_agents(),
            joint_actions,
            &cfg,
            &mut stream(seed, Stream::Init, 0),
            stream(seed, Stream::Replay, 0),
        )?;
        Ok(Self {
            cfg,
            learner,
            explore_rng: stream(seed, Stream::Exploration, 0),
            episodes_done: 0,
        })
    }

    pub fn greedy_joint_action(&mut self, inputs: &[Vec<f64>]) -> Result<usize> {
        self.learner.act(&concat_inputs(inputs), 0.0, &mut self.explore_rng)
    }

    pub fn run_episode<E: MultiAgentEnv + ?Sized>(&mut self, env: &mut E, episode: usize) -> Result<EpisodeRecord> {
        let epsilon = self.cfg.epsilon_schedule().at(episode);
        let lr = self.cfg.lr_schedule().at(episode);
        if self.cfg.clear_replay_each_episode {
            self.learner.clear_replay();
        }
        let (num_actions, num_agents) = (env.num_actions(), env.num_agents());
        let mut state = concat_inputs(&env.reset_episode(episode as u64));
        let mut acc = EpisodeAccumulator::default();
        for _ in 0..env.horizon() {
            let joint = self.learner.act(&state, epsilon, &mut self.explore_rng)?;
            let report = env.step_joint(&split_joint(joint, num_actions, num_agents))?;
            acc.push(&report);
            let next = concat_inputs(&report.next_inputs);
            self.learner.remember(Experience {
                obs: std::mem::replace(&mut state, next.clone()),
                action: joint,
                reward: report.reward,
                next_obs: next,
                terminal: report.terminal,
            });
            self.learner.learn(&self.cfg, lr)?;
            if report.terminal {
                break;
            }
        }
        self.episodes_done = episode;
        Ok(acc.finish(episode, num_agents, epsilon, lr))
    }
}

pub fn train_cdrl<E: MultiAgentEnv + ?Sized>(
    env: &mut E,
    cfg: &TrainerConfig,
    seed: u64,
) -> Result<Vec<EpisodeRecord>> {
    let mut trainer = CentralizedTrainer::new(env, cfg.clone(), seed)?;
    (1..=cfg.episodes).map(|e| trainer.run_episode(env, e)).collect()
}

//! The α/β agent pair and its federated Q-network.
//!
//! Agent α receives the global reward, agent β does not. Each keeps a local
//! Q-network over its own observation. The federated network maps
//! `[own local Q-values | peer's noised Q-values]` to joint-action values;
//! both sides train it, each through its own local network, and no gradient
//! crosses into the peer's network.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::config::{SharingMode, TrainerConfig};
use super::encrypt::{encrypt_batch, encrypt_q, EncryptedQ};
use super::policy::argmax;
use super::replay::ReplayBuffer;
use crate::error::{Error, Result};
use crate::nn::{clip_global_norm, DenseNet, GradientSet, Matrix};
use crate::rng::StreamRng;

/// One slot of joint experience. Index 0 is agent α, index 1 agent β.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointTransition {
    pub obs: [Vec<f64>; 2],
    pub actions: [usize; 2],
    pub reward: f64,
    pub next_obs: [Vec<f64>; 2],
    pub terminal: bool,
}

/// A minibatch gathered into matrices.
#[derive(Debug, Clone)]
pub struct FederatedBatch {
    pub obs: [Matrix; 2],
    pub next_obs: [Matrix; 2],
    pub actions: [Vec<usize>; 2],
    pub rewards: Vec<f64>,
    pub terminal: Vec<bool>,
}

impl FederatedBatch {
    pub fn gather(buffer: &ReplayBuffer<JointTransition>, indices: &[usize]) -> Self {
        let items: Vec<&JointTransition> = indices.iter().map(|&i| buffer.get(i)).collect();
        Self::from_transitions(&items)
    }

    pub fn from_transitions(items: &[&JointTransition]) -> Self {
        let side = |s: usize, next: bool| {
            let rows: Vec<&[f64]> = items
                .iter()
                .map(|t| {
                    if next {
                        t.next_obs[s].as_slice()
                    } else {
                        t.obs[s].as_slice()
                    }
                })
                .collect();
            Matrix::from_rows(&rows)
        };
        Self {
            obs: [side(0, false), side(1, false)],
            next_obs: [side(0, true), side(1, true)],
            actions: [
                items.iter().map(|t| t.actions[0]).collect(),
                items.iter().map(|t| t.actions[1]).collect(),
            ],
            rewards: items.iter().map(|t| t.reward).collect(),
            terminal: items.iter().map(|t| t.terminal).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Alpha,
    Beta,
}

impl Side {
    pub fn own(self) -> usize {
        match self {
            Side::Alpha => 0,
            Side::Beta => 1,
        }
    }

    pub fn peer(self) -> usize {
        1 - self.own()
    }

    pub fn other(self) -> Side {
        match self {
            Side::Alpha => Side::Beta,
            Side::Beta => Side::Alpha,
        }
    }
}

/// Networks of the α/β pair. β has no target network: the bootstrap target
/// uses α's and the federated network's targets with β's live network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FederatedAgentPair {
    pub alpha: DenseNet,
    pub alpha_target: DenseNet,
    pub beta: DenseNet,
    pub mlp: DenseNet,
    pub mlp_target: DenseNet,
    num_actions: usize,
    sharing: SharingMode,
}

/// Loss and unclipped gradients of one side's composed objective.
#[derive(Debug, Clone)]
pub struct SideGradients {
    pub loss: f64,
    pub local: GradientSet,
    pub mlp: GradientSet,
}

impl FederatedAgentPair {
    pub fn new(obs_dim: usize, num_actions: usize, cfg: &TrainerConfig, rng: &mut StreamRng) -> Result<Self> {
        let local = cfg.local_dims(obs_dim, num_actions);
        let alpha = DenseNet::init(&local, cfg.activation, rng)?;
        let beta = DenseNet::init(&local, cfg.activation, rng)?;
        let (peer, joint) = match cfg.sharing {
            SharingMode::Vector => (num_actions, num_actions * num_actions),
            SharingMode::Scalar => (1, num_actions),
        };
        let mlp = DenseNet::init(&cfg.mlp_dims(num_actions + peer, joint), cfg.activation, rng)?;
        Ok(Self {
            alpha_target: alpha.clone(),
            alpha,
            beta,
            mlp_target: mlp.clone(),
            mlp,
            num_actions,
            sharing: cfg.sharing,
        })
    }

    /// Assemble a pair from explicit networks, checking that they fit together.
    pub fn from_parts(
        alpha: DenseNet,
        alpha_target: DenseNet,
        beta: DenseNet,
        mlp: DenseNet,
        mlp_target: DenseNet,
        sharing: SharingMode,
    ) -> Result<Self> {
        let num_actions = alpha.output_dim();
        let (peer, joint) = match sharing {
            SharingMode::Vector => (num_actions, num_actions * num_actions),
            SharingMode::Scalar => (1, num_actions),
        };
        if !alpha.same_architecture(&alpha_target)
            || !alpha.same_architecture(&beta)
            || !mlp.same_architecture(&mlp_target)
            || mlp.input_dim() != num_actions + peer
            || mlp.output_dim() != joint
        {
            return Err(Error::shape("federated networks do not fit together"));
        }
        Ok(Self {
            alpha,
            alpha_target,
            beta,
            mlp,
            mlp_target,
            num_actions,
            sharing,
        })
    }

    pub fn num_actions(&self) -> usize {
        self.num_actions
    }

    pub fn sharing(&self) -> SharingMode {
        self.sharing
    }

    /// Width of the federated network's output.
    pub fn joint_width(&self) -> usize {
        match self.sharing {
            SharingMode::Vector => self.num_actions * self.num_actions,
            SharingMode::Scalar => self.num_actions,
        }
    }

    /// Output entry scoring `own` given the peer's `peer` action.
    pub fn joint_index(&self, own: usize, peer: usize) -> usize {
        match self.sharing {
            SharingMode::Vector => own * self.num_actions + peer,
            SharingMode::Scalar => own,
        }
    }

    fn local(&self, side: Side) -> &DenseNet {
        match side {
            Side::Alpha => &self.alpha,
            Side::Beta => &self.beta,
        }
    }

    /// Local Q-values of one agent.
    pub fn local_q(&self, side: Side, input: &[f64]) -> Result<Vec<f64>> {
        self.local(side).forward(input)
    }

    /// What an agent shares: the whole Q-vector, or the value at `action`
    /// in scalar mode, noised with `sigma`.
    pub fn share<R: Rng + ?Sized>(&self, q: &[f64], action: usize, sigma: f64, rng: &mut R) -> EncryptedQ {
        match self.sharing {
            SharingMode::Vector => encrypt_q(q, sigma, rng),
            SharingMode::Scalar => encrypt_q(&[q[action]], sigma, rng),
        }
    }

    fn share_batch<R: Rng + ?Sized>(&self, q: &Matrix, actions: &[usize], sigma: f64, rng: &mut R) -> Matrix {
        match self.sharing {
            SharingMode::Vector => encrypt_batch(q, sigma, rng),
            SharingMode::Scalar => {
                let picked: Vec<f64> = (0..q.rows()).map(|i| q.get(i, actions[i])).collect();
                encrypt_batch(&Matrix::from_vec(q.rows(), 1, picked), sigma, rng)
            }
        }
    }

    /// Federated network output for `[own_q | peer]`.
    pub fn joint_q(&self, own_q: &[f64], peer: &EncryptedQ) -> Result<Vec<f64>> {
        if own_q.len() + peer.values.len() != self.mlp.input_dim() {
            return Err(Error::shape(format!(
                "joint input {} + {} does not match federated network input {}",
                own_q.len(),
                peer.values.len(),
                self.mlp.input_dim()
            )));
        }
        let mut input = own_q.to_vec();
        input.extend_from_slice(&peer.values);
        self.mlp.forward(&input)
    }

    /// Bootstrap targets `Y_j = r_j + gamma * max_a Q*_MLP([Q*_α(o'_α) | Q̂_β(o'_β)])`,
    /// or `r_j` for terminal transitions.
    pub fn compute_target<R: Rng + ?Sized>(
        &self,
        batch: &FederatedBatch,
        gamma: f64,
        sigma: f64,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        let q_alpha = self.alpha_target.forward_batch(&batch.next_obs[0])?;
        let q_beta = self.beta.forward_batch(&batch.next_obs[1])?;
        let beta_greedy: Vec<usize> = (0..q_beta.rows()).map(|i| argmax(q_beta.row(i))).collect();
        let shared = self.share_batch(&q_beta, &beta_greedy, sigma, rng);
        let joint = self.mlp_target.forward_batch(&q_alpha.hconcat(&shared))?;
        Ok((0..batch.len())
            .map(|j| {
                if batch.terminal[j] {
                    batch.rewards[j]
                } else {
                    let best = joint.row(j).iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    batch.rewards[j] + gamma * best
                }
            })
            .collect())
    }

    /// Indices into the federated output of the stored joint actions, seen
    /// from `side`.
    pub fn batch_joint_indices(&self, side: Side, batch: &FederatedBatch) -> Vec<usize> {
        batch.actions[side.own()]
            .iter()
            .zip(&batch.actions[side.peer()])
            .map(|(&own, &peer)| self.joint_index(own, peer))
            .collect()
    }

    /// Noised peer values for a training step of `side`, drawn from the
    /// peer's current local network.
    pub fn shared_peer_batch<R: Rng + ?Sized>(
        &self,
        side: Side,
        batch: &FederatedBatch,
        sigma: f64,
        rng: &mut R,
    ) -> Result<Matrix> {
        let q_peer = self.local(side.other()).forward_batch(&batch.obs[side.peer()])?;
        Ok(self.share_batch(&q_peer, &batch.actions[side.peer()], sigma, rng))
    }

    /// Mean squared error between `targets` and the federated output at the
    /// stored joint actions, with gradients for `side`'s local network and the
    /// federated network. `shared_peer` enters as a constant.
    pub fn side_gradients(
        &self,
        side: Side,
        batch: &FederatedBatch,
        targets: &[f64],
        shared_peer: &Matrix,
    ) -> Result<SideGradients> {
        let n = batch.len();
        if targets.len() != n || shared_peer.rows() != n {
            return Err(Error::shape("targets and shared values must match the batch"));
        }
        let local = self.local(side);
        let (own_q, local_cache) = local.forward_cached(&batch.obs[side.own()])?;
        let (joint, mlp_cache) = self.mlp.forward_cached(&own_q.hconcat(shared_peer))?;
        let indices = self.batch_joint_indices(side, batch);
        let mut out_grad = Matrix::zeros(n, joint.cols());
        let mut loss = 0.0;
        for (j, &idx) in indices.iter().enumerate() {
            let err = joint.get(j, idx) - targets[j];
            loss += err * err;
            out_grad.set(j, idx, 2.0 * err / n as f64);
        }
        loss /= n as f64;
        if !loss.is_finite() {
            return Err(Error::NonFinite("federated loss"));
        }
        let (mlp_grads, input_grad) = self.mlp.backward(&mlp_cache, &out_grad)?;
        let own_grad = input_grad.columns(0, self.num_actions);
        let (local_grads, _) = local.backward(&local_cache, &own_grad)?;
        Ok(SideGradients {
            loss,
            local: local_grads,
            mlp: mlp_grads,
        })
    }

    /// One gradient step of `side`'s local network and the federated network.
    /// The peer's network is only read. Returns the pre-step loss.
    #[allow(clippy::too_many_arguments)]
    pub fn train_step<R: Rng + ?Sized>(
        &mut self,
        side: Side,
        batch: &FederatedBatch,
        targets: &[f64],
        lr: f64,
        sigma: f64,
        grad_clip: f64,
        rng: &mut R,
    ) -> Result<f64> {
        let shared = self.shared_peer_batch(side, batch, sigma, rng)?;
        let SideGradients {
            loss,
            mut local,
            mut mlp,
        } = self.side_gradients(side, batch, targets, &shared)?;
        clip_global_norm(&mut [&mut local, &mut mlp], grad_clip);
        if !local.is_finite() || !mlp.is_finite() {
            return Err(Error::NonFinite("federated gradient"));
        }
        match side {
            Side::Alpha => self.alpha.sgd_apply(&local, lr)?,
            Side::Beta => self.beta.sgd_apply(&local, lr)?,
        }
        self.mlp.sgd_apply(&mlp, lr)?;
        Ok(loss)
    }

    /// α's update: local α network and federated network, peer input from β.
    pub fn train_step_alpha<R: Rng + ?Sized>(
        &mut self,
        batch: &FederatedBatch,
        targets: &[f64],
        lr: f64,
        sigma: f64,
        grad_clip: f64,
        rng: &mut R,
    ) -> Result<f64> {
        self.train_step(Side::Alpha, batch, targets, lr, sigma, grad_clip, rng)
    }

    /// β's update with the targets computed on the α side.
    pub fn train_step_beta<R: Rng + ?Sized>(
        &mut self,
        batch: &FederatedBatch,
        targets: &[f64],
        lr: f64,
        sigma: f64,
        grad_clip: f64,
        rng: &mut R,
    ) -> Result<f64> {
        self.train_step(Side::Beta, batch, targets, lr, sigma, grad_clip, rng)
    }

    /// Refresh the target networks from the live ones.
    pub fn sync_targets(&mut self) -> Result<()> {
        self.alpha.copy_into(&mut self.alpha_target)?;
        self.mlp.copy_into(&mut self.mlp_target)
    }
}

//! Federated multi-agent Q-learning with Gaussian-noised Q-value sharing.

pub mod config;
pub mod encrypt;
pub mod federated;
pub mod policy;
pub mod replay;
pub mod trainer;

pub use config::{SharingMode, TrainerConfig};
pub use encrypt::{encrypt_batch, encrypt_q, EncryptedQ};
pub use federated::{FederatedAgentPair, FederatedBatch, JointTransition, Side, SideGradients};
pub use policy::{argmax, compose_joint, decompose_joint, epsilon_greedy};
pub use replay::ReplayBuffer;
pub use trainer::{run_training, FederatedTrainer, IsolationAudit, TrainingRun, EVAL_EPISODE_OFFSET};

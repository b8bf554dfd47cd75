//! Joint edge association and power allocation for a two-lane vehicular
//! network, learned with federated multi-agent Q-learning over Gaussian-noised
//! shared Q-values.
//!
//! The crate is split the same way the experiment pipeline is:
//!
//! - [`env`]: freeway geometry, channel and mobility models, and the
//!   decentralized observation/action/reward interface.
//! - [`nn`]: a small dense-network engine with exact backpropagation.
//! - [`agents`]: the federated α/β trainer with encrypted Q-value sharing.
//! - [`baselines`]: centralized DDQN, independent DDQN and FedAvg comparisons.
//! - [`harness`]: configuration, seeded experiment runs, sweeps and outputs.

pub mod agents;
pub mod baselines;
pub mod env;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod nn;
pub mod rng;

pub use error::{Error, Result};

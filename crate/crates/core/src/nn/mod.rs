//! Dense networks with exact reverse-mode gradients.

pub mod checkpoint;
pub mod dense;
pub mod matrix;
pub mod schedule;

pub use checkpoint::{net_from_bytes, net_to_bytes, read_net, write_net};
pub use dense::{clip_global_norm, Activation, DenseNet, ForwardCache, GradientSet, Layer};
pub use matrix::Matrix;
pub use schedule::{lr_at, LinearSchedule, LrSchedule};

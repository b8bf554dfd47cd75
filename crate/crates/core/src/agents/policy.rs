use rand::Rng;

use crate::error::{Error, Result};

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Uniform random index with probability `epsilon`, otherwise [`argmax`].
/// Always consumes one uniform draw so stream usage does not depend on the
/// branch taken.
pub fn epsilon_greedy<R: Rng + ?Sized>(values: &[f64], epsilon: f64, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    if u < epsilon {
        rng.random_range(0..values.len())
    } else {
        argmax(values)
    }
}

/// Split a joint index into `(own, peer)` actions.
pub fn decompose_joint(joint: usize, num_actions: usize) -> Result<(usize, usize)> {
    if joint >= num_actions * num_actions {
        return Err(Error::InvalidAction(format!(
            "joint index {joint} outside [0, {})",
            num_actions * num_actions
        )));
    }
    Ok((joint / num_actions, joint % num_actions))
}

pub fn compose_joint(own: usize, peer: usize, num_actions: usize) -> usize {
    own * num_actions + peer
}

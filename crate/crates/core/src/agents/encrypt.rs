//! Gaussian perturbation of shared Q-values.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::nn::Matrix;

/// A Q-vector with i.i.d. `N(0, sigma^2)` noise added.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncryptedQ {
    pub values: Vec<f64>,
    pub sigma: f64,
}

/// Noise `q` elementwise. With `sigma == 0` the values are returned
/// unchanged and no randomness is consumed.
pub fn encrypt_q<R: Rng + ?Sized>(q: &[f64], sigma: f64, rng: &mut R) -> EncryptedQ {
    let mut values = q.to_vec();
    perturb(&mut values, sigma, rng);
    EncryptedQ { values, sigma }
}

/// Noise every entry of a batch in row-major order.
pub fn encrypt_batch<R: Rng + ?Sized>(q: &Matrix, sigma: f64, rng: &mut R) -> Matrix {
    let mut values = q.as_slice().to_vec();
    perturb(&mut values, sigma, rng);
    Matrix::from_vec(q.rows(), q.cols(), values)
}

fn perturb<R: Rng + ?Sized>(values: &mut [f64], sigma: f64, rng: &mut R) {
    if sigma == 0.0 {
        return;
    }
    for v in values {
        let n: f64 = rng.sample(StandardNormal);
        *v += sigma * n;
    }
}

//! Downlink channel: log-distance path loss with Rayleigh fading.

use rand::Rng;
use rand_distr::Exp1;

/// Distances below this floor (km) are clamped before taking the log.
pub const MIN_DISTANCE_KM: f64 = 1e-3;

/// Path loss in dB at `distance_km`: 128.1 + 37.6 log10(d).
pub fn path_loss_db(distance_km: f64) -> f64 {
    128.1 + 37.6 * distance_km.max(MIN_DISTANCE_KM).log10()
}

/// Mean linear gain at `distance_km` (fading averaged out).
pub fn mean_channel_gain(distance_km: f64) -> f64 {
    10f64.powf(-path_loss_db(distance_km) / 10.0)
}

/// Linear gain with a given fading power `fading` (|h|^2).
pub fn channel_gain_with_fading(distance_km: f64, fading: f64) -> f64 {
    mean_channel_gain(distance_km) * fading
}

/// One channel realization. The squared magnitude of unit-variance Rayleigh
/// fading is exponential with mean 1.
pub fn sample_channel_gain<R: Rng + ?Sized>(distance_km: f64, rng: &mut R) -> f64 {
    let fading: f64 = rng.sample(Exp1);
    channel_gain_with_fading(distance_km, fading)
}

/// Shannon rate in bit/s/Hz.
pub fn achievable_rate(tx_power_w: f64, gain: f64, noise_w: f64) -> f64 {
    (1.0 + tx_power_w * gain / noise_w).log2()
}

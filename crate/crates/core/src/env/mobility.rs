//! Gauss-Markov speed process on a ring road.

use rand::Rng;
use rand_distr::StandardNormal;

use super::config::EnvConfig;
use super::world::WorldState;

/// Floor keeping speeds strictly positive.
pub const MIN_SPEED: f64 = 1e-3;

/// One Gauss-Markov update with innovation `w ~ N(0, 1)`.
pub fn next_speed(speed: f64, mean: f64, std: f64, memory: f64, w: f64) -> f64 {
    memory * speed + (1.0 - memory) * mean + std * (1.0 - memory * memory).sqrt() * w
}

/// Advance every vehicle by one slot. Lanes never change.
pub fn advance_mobility<R: Rng + ?Sized>(world: &mut WorldState, cfg: &EnvConfig, mean_speeds: &[f64], rng: &mut R) {
    for (vehicle, &mean) in world.vehicles.iter_mut().zip(mean_speeds) {
        let w: f64 = rng.sample(StandardNormal);
        let speed = next_speed(vehicle.speed, mean, cfg.speed_std, cfg.memory_depth, w);
        vehicle.speed = speed.max(MIN_SPEED);
        vehicle.x = (vehicle.x + vehicle.speed * cfg.ts_duration).rem_euclid(cfg.road_length);
    }
}

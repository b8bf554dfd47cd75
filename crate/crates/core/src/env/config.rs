use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and reward parameters of the vehicular world.
///
/// Defaults reproduce the reference freeway: two vehicles, twelve RSUs on a
/// 1 km ring road, 200 m coverage, four observable RSUs and four power
/// levels over [23, 35] dBm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvConfig {
    pub num_vehicles: usize,
    pub num_rsus: usize,
    /// Road length in metres. Positions wrap modulo this length.
    pub road_length: f64,
    /// Maximum vehicle-RSU distance (m) at which an RSU is observable.
    pub rsu_coverage: f64,
    pub o_max: usize,
    pub power_levels: usize,
    pub p_min_dbm: f64,
    pub p_max_dbm: f64,
    /// Minimum downlink rate in bit/s/Hz.
    pub r_min: f64,
    pub noise_dbm: f64,
    /// Utility weights for rate, handover and transmit power.
    pub weights: [f64; 3],
    /// Flat reward penalty applied once per slot with any violation.
    pub penalty: f64,
    /// Time slots per episode.
    pub horizon: usize,
    /// Slot duration in seconds.
    pub ts_duration: f64,
    /// Range from which each vehicle's asymptotic mean speed is drawn (m/s).
    pub mean_speed_range: [f64; 2],
    /// Explicit per-vehicle mean speeds; overrides `mean_speed_range`.
    pub mean_speeds: Option<Vec<f64>>,
    /// Stationary standard deviation of the speed process (m/s).
    pub speed_std: f64,
    /// Gauss-Markov memory depth in [0, 1].
    pub memory_depth: f64,
    /// Lane centre lines (m). Vehicle k drives on lane k mod 2.
    pub lane_y: [f64; 2],
    /// RSU rows on the south and north side of the road (m).
    pub rsu_row_y: [f64; 2],
    /// Gain range (dB) mapped affinely onto [0, 1] in learner inputs.
    pub gain_db_range: [f64; 2],
    /// Divisor applied to y coordinates in learner inputs (m).
    pub y_scale: f64,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            num_vehicles: 2,
            num_rsus: 12,
            road_length: 1000.0,
            rsu_coverage: 200.0,
            o_max: 4,
            power_levels: 4,
            p_min_dbm: 23.0,
            p_max_dbm: 35.0,
            r_min: 8.0,
            noise_dbm: -114.0,
            weights: [0.5, 0.25, 0.25],
            penalty: -1.0,
            horizon: 100,
            ts_duration: 1.0,
            mean_speed_range: [5.0, 10.0],
            mean_speeds: None,
            speed_std: 0.1,
            memory_depth: 0.1,
            lane_y: [0.0, 4.0],
            rsu_row_y: [-10.0, 14.0],
            gain_db_range: [-130.0, -40.0],
            y_scale: 20.0,
        }
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

impl EnvConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::config(msg));
        if self.num_vehicles < 1 {
            return fail("num_vehicles must be at least 1".into());
        }
        if self.num_rsus < self.num_vehicles {
            return fail(format!(
                "num_rsus ({}) must be at least num_vehicles ({})",
                self.num_rsus, self.num_vehicles
            ));
        }
        if self.num_rsus % 2 != 0 {
            return fail(format!(
                "num_rsus ({}) must be even so both road sides hold the same count",
                self.num_rsus
            ));
        }
        if self.o_max < 1 || self.o_max > self.num_rsus {
            return fail(format!("o_max ({}) must lie in [1, num_rsus]", self.o_max));
        }
        if self.power_levels < 2 {
            return fail("power_levels must be at least 2".into());
        }
        if !(self.p_min_dbm < self.p_max_dbm) {
            return fail("p_min_dbm must be below p_max_dbm".into());
        }
        if !(self.r_min > 0.0) {
            return fail("r_min must be positive".into());
        }
        if let Some(bad) = self.weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return fail(format!("utility weight {bad} outside [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.memory_depth) {
            return fail("memory_depth must lie in [0, 1]".into());
        }
        if !(self.road_length > 0.0) || !(self.rsu_coverage > 0.0) {
            return fail("road_length and rsu_coverage must be positive".into());
        }
        if self.horizon < 1 || !(self.ts_duration > 0.0) {
            return fail("horizon and ts_duration must be positive".into());
        }
        if !(self.speed_std >= 0.0) {
            return fail("speed_std must be non-negative".into());
        }
        let [lo, hi] = self.mean_speed_range;
        if !(lo > 0.0 && lo <= hi) {
            return fail("mean_speed_range must be positive and ordered".into());
        }
        if let Some(speeds) = &self.mean_speeds {
            if speeds.len() != self.num_vehicles {
                return fail(format!(
                    "mean_speeds has {} entries for {} vehicles",
                    speeds.len(),
                    self.num_vehicles
                ));
            }
            if speeds.iter().any(|v| !(*v > 0.0)) {
                return fail("mean_speeds must be positive".into());
            }
        }
        if !(self.gain_db_range[0] < self.gain_db_range[1]) || !(self.y_scale > 0.0) {
            return fail("gain_db_range must be ordered and y_scale positive".into());
        }
        Ok(())
    }

    /// Number of per-agent discrete actions (slot x power level).
    pub fn num_actions(&self) -> usize {
        self.o_max * self.power_levels
    }

    /// Length of the normalized learner input vector.
    pub fn obs_dim(&self) -> usize {
        3 * self.o_max + 2
    }

    /// Transmit power of level `level` in dBm; levels are evenly spaced.
    pub fn power_dbm(&self, level: usize) -> f64 {
        let step = (self.p_max_dbm - self.p_min_dbm) / (self.power_levels - 1) as f64;
        self.p_min_dbm + step * level as f64
    }

    pub fn power_watts(&self, level: usize) -> f64 {
        dbm_to_watts(self.power_dbm(level))
    }

    pub fn p_max_watts(&self) -> f64 {
        dbm_to_watts(self.p_max_dbm)
    }

    pub fn noise_watts(&self) -> f64 {
        dbm_to_watts(self.noise_dbm)
    }
}

use serde::{Deserialize, Serialize};

use super::config::EnvConfig;
use super::layout::{Position, RsuLayout};

/// One agent's local view of a slot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// Linear channel gains, one per slot; padded slots hold 0.
    pub gains: Vec<f64>,
    /// RSU positions per slot; padded slots hold [`Position::SENTINEL`].
    pub rsu_locations: Vec<Position>,
    /// Position of the RSU associated in the previous slot, or the sentinel.
    pub prev_rsu_location: Position,
    /// Global RSU ids backing the non-padded slots, nearest first. Kept by
    /// the environment and never fed to learners.
    pub slot_map: Vec<usize>,
}

/// Observable RSUs of a vehicle at `position`: within coverage, ascending
/// distance, ties broken by lower id, truncated to `o_max`.
pub fn observable_rsus(position: &Position, layout: &RsuLayout, cfg: &EnvConfig) -> Vec<usize> {
    let mut in_range: Vec<(f64, usize)> = layout
        .rsus()
        .iter()
        .map(|r| (position.distance(&r.position), r.id))
        .filter(|(d, _)| *d <= cfg.rsu_coverage)
        .collect();
    in_range.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    in_range.truncate(cfg.o_max);
    in_range.into_iter().map(|(_, id)| id).collect()
}

/// Build the observation of a vehicle from this slot's gains (`gains[r]` is
/// the draw for RSU `r`).
pub fn observe(
    position: &Position,
    prev_assoc: Option<usize>,
    gains: &[f64],
    layout: &RsuLayout,
    cfg: &EnvConfig,
) -> Observation {
    let slot_map = observable_rsus(position, layout, cfg);
    let mut obs_gains = vec![0.0; cfg.o_max];
    let mut locations = vec![Position::SENTINEL; cfg.o_max];
    for (slot, &id) in slot_map.iter().enumerate() {
        obs_gains[slot] = gains[id];
        locations[slot] = layout.position(id);
    }
    Observation {
        gains: obs_gains,
        rsu_locations: locations,
        prev_rsu_location: prev_assoc.map_or(Position::SENTINEL, |id| layout.position(id)),
        slot_map,
    }
}

impl Observation {
    pub fn num_valid_slots(&self) -> usize {
        self.slot_map.len()
    }

    /// Normalized learner input: `[gains | x0 y0 .. x_{O-1} y_{O-1} | prev_x prev_y]`.
    ///
    /// Gains go through dB and an affine map of `gain_db_range` onto [0, 1]
    /// (clamped below at 0, padded slots exactly 0); x is divided by the road
    /// length and y by `y_scale`.
    pub fn to_input(&self, cfg: &EnvConfig) -> Vec<f64> {
        let [db_lo, db_hi] = cfg.gain_db_range;
        let mut input = Vec::with_capacity(cfg.obs_dim());
        input.extend(self.gains.iter().map(|&g| {
            if g > 0.0 {
                ((10.0 * g.log10() - db_lo) / (db_hi - db_lo)).max(0.0)
            } else {
                0.0
            }
        }));
        let mut push_pos = |p: &Position| {
            input.push(p.x / cfg.road_length);
            input.push(p.y / cfg.y_scale);
        };
        for p in &self.rsu_locations {
            push_pos(p);
        }
        push_pos(&self.prev_rsu_location);
        input
    }
}

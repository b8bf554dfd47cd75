use serde::{Deserialize, Serialize};

use super::config::EnvConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    /// Marker for "no RSU" in observations.
    pub const SENTINEL: Position = Position { x: -1.0, y: -1.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    South,
    North,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rsu {
    pub id: usize,
    pub position: Position,
    pub side: Side,
}

/// RSUs split evenly between both road sides with uniform spacing
/// `x_i = (2i - 1) L / (2 n)` for `n` RSUs per side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsuLayout {
    rsus: Vec<Rsu>,
}

impl RsuLayout {
    /// South-side RSUs take ids `0..R/2`, north-side ids `R/2..R`, both in
    /// increasing x.
    pub fn even(cfg: &EnvConfig) -> Self {
        let per_side = cfg.num_rsus / 2;
        let mut rsus = Vec::with_capacity(cfg.num_rsus);
        for (side, y) in [(Side::South, cfg.rsu_row_y[0]), (Side::North, cfg.rsu_row_y[1])] {
            for i in 1..=per_side {
                let x = (2 * i - 1) as f64 * cfg.road_length / (2 * per_side) as f64;
                rsus.push(Rsu {
                    id: rsus.len(),
                    position: Position::new(x, y),
                    side,
                });
            }
        }
        Self { rsus }
    }

    pub fn from_rsus(rsus: Vec<Rsu>) -> Self {
        Self { rsus }
    }

    pub fn len(&self) -> usize {
        self.rsus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rsus.is_empty()
    }

    pub fn rsus(&self) -> &[Rsu] {
        &self.rsus
    }

    pub fn position(&self, id: usize) -> Position {
        self.rsus[id].position
    }
}

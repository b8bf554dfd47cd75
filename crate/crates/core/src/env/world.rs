use rand::Rng;
use serde::{Deserialize, Serialize};

use super::channel::{achievable_rate, sample_channel_gain};
use super::config::EnvConfig;
use super::layout::{Position, RsuLayout};
use super::mobility::advance_mobility;
use super::observation::{observe, Observation};
use crate::error::{Error, Result};
use crate::rng::{stream, Stream, StreamRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Vehicle {
    pub x: f64,
    pub y: f64,
    pub speed: f64,
    pub lane: usize,
}

impl Vehicle {
    pub fn position(&self) -> Position {
        Position::new(self.x, self.y)
    }
}

/// Ground truth hidden from the agents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldState {
    pub vehicles: Vec<Vehicle>,
    /// Association of the previous slot; `None` before the first slot or
    /// after a slot without any RSU in range.
    pub prev_assoc: Vec<Option<usize>>,
    /// 1-based slot index.
    pub t: usize,
}

/// Action of one agent: a slot of its own observation plus a power level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentAction {
    pub rsu_slot: usize,
    pub power_level: usize,
}

impl AgentAction {
    pub fn from_index(index: usize, cfg: &EnvConfig) -> Result<Self> {
        if index >= cfg.num_actions() {
            return Err(Error::InvalidAction(format!(
                "action index {index} outside [0, {})",
                cfg.num_actions()
            )));
        }
        Ok(Self {
            rsu_slot: index / cfg.power_levels,
            power_level: index % cfg.power_levels,
        })
    }

    pub fn index(&self, cfg: &EnvConfig) -> usize {
        self.rsu_slot * cfg.power_levels + self.power_level
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// Two or more vehicles picked the same RSU.
    Conflict { rsu: usize },
    /// A vehicle's rate fell below the minimum.
    RateBelowMin { vehicle: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub reward: f64,
    /// Mean utility over vehicles, without the penalty.
    pub pat: f64,
    pub utilities: Vec<f64>,
    pub rates: Vec<f64>,
    pub ho_flags: Vec<u8>,
    pub tx_power_w: Vec<f64>,
    /// RSU chosen by each vehicle this slot (before conflict resolution).
    pub associations: Vec<Option<usize>>,
    pub violations: Vec<Violation>,
    pub observations: Vec<Observation>,
    pub terminal: bool,
}

/// 1 iff there was a previous association and it differs from `cur`.
pub fn handover_indicator(prev: Option<usize>, cur: usize) -> u8 {
    matches!(prev, Some(p) if p != cur) as u8
}

/// Per-vehicle trade-off utility.
pub fn utility(rate: f64, ho: u8, tx_power_w: f64, cfg: &EnvConfig) -> f64 {
    let [w_rate, w_ho, w_power] = cfg.weights;
    w_rate * rate / cfg.r_min - w_ho * ho as f64 - w_power * tx_power_w / cfg.p_max_watts()
}

/// Violations of the one-vehicle-per-RSU and minimum-rate constraints.
/// The one-RSU-per-vehicle constraint holds by construction of the action.
pub fn check_constraints(choices: &[Option<usize>], rates: &[f64], r_min: f64) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (k, choice) in choices.iter().enumerate() {
        if let Some(r) = *choice {
            let taken = choices[..k].contains(&Some(r));
            if taken && !seen.contains(&r) {
                seen.push(r);
                violations.push(Violation::Conflict { rsu: r });
            }
        }
    }
    violations.extend(
        rates
            .iter()
            .enumerate()
            .filter(|(_, rate)| **rate < r_min)
            .map(|(vehicle, _)| Violation::RateBelowMin { vehicle }),
    );
    violations
}

/// The vehicular environment. Each episode reseeds its placement, mobility
/// and fading streams from `(seed, episode)`, so trajectories depend only on
/// the seed and the actions taken.
#[derive(Debug, Clone)]
pub struct VehicularEnv {
    cfg: EnvConfig,
    layout: RsuLayout,
    mean_speeds: Vec<f64>,
    seed: u64,
    world: WorldState,
    /// `gains[k][r]`: this slot's draw for vehicle k and RSU r.
    gains: Vec<Vec<f64>>,
    observations: Vec<Observation>,
    mobility_rng: StreamRng,
    fading_rng: StreamRng,
}

impl VehicularEnv {
    pub fn new(cfg: EnvConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let layout = RsuLayout::even(&cfg);
        let mean_speeds = match &cfg.mean_speeds {
            Some(v) => v.clone(),
            None => {
                let mut rng = stream(seed, Stream::MeanSpeed, 0);
                let [lo, hi] = cfg.mean_speed_range;
                (0..cfg.num_vehicles)
                    .map(|_| if hi > lo { rng.random_range(lo..hi) } else { lo })
                    .collect()
            }
        };
        let mut env = Self {
            world: WorldState {
                vehicles: Vec::new(),
                prev_assoc: Vec::new(),
                t: 1,
            },
            gains: Vec::new(),
            observations: Vec::new(),
            mobility_rng: stream(seed, Stream::Mobility, 0),
            fading_rng: stream(seed, Stream::Fading, 0),
            cfg,
            layout,
            mean_speeds,
            seed,
        };
        env.reset(0);
        Ok(env)
    }

    /// Start `episode`: uniform positions on each lane, speeds at their
    /// means, no previous association, t = 1.
    pub fn reset(&mut self, episode: u64) -> &[Observation] {
        let mut placement = stream(self.seed, Stream::Placement, episode);
        self.mobility_rng = stream(self.seed, Stream::Mobility, episode);
        self.fading_rng = stream(self.seed, Stream::Fading, episode);
        let cfg = &self.cfg;
        self.world = WorldState {
            vehicles: (0..cfg.num_vehicles)
                .map(|k| {
                    let lane = k % 2;
                    Vehicle {
                        x: placement.random_range(0.0..cfg.road_length),
                        y: cfg.lane_y[lane],
                        speed: self.mean_speeds[k],
                        lane,
                    }
                })
                .collect(),
            prev_assoc: vec![None; cfg.num_vehicles],
            t: 1,
        };
        self.resample_and_observe();
        &self.observations
    }

    fn resample_and_observe(&mut self) {
        let layout = &self.layout;
        let rng = &mut self.fading_rng;
        self.gains = self
            .world
            .vehicles
            .iter()
            .map(|v| {
                let pos = v.position();
                layout
                    .rsus()
                    .iter()
                    .map(|r| sample_channel_gain(pos.distance(&r.position) / 1000.0, rng))
                    .collect()
            })
            .collect();
        self.observations = self
            .world
            .vehicles
            .iter()
            .zip(&self.world.prev_assoc)
            .zip(&self.gains)
            .map(|((v, prev), gains)| observe(&v.position(), *prev, gains, layout, &self.cfg))
            .collect();
    }

    /// Execute one joint action.
    ///
    /// A padded slot falls back to slot 0. A vehicle with no RSU in range is
    /// unserved (rate 0, power 0, no handover, association cleared). On a
    /// conflict the lowest vehicle index keeps the RSU and the others get
    /// rate 0 and power 0.
    pub fn step(&mut self, actions: &[AgentAction]) -> Result<StepResult> {
        let cfg = &self.cfg;
        let k_count = cfg.num_vehicles;
        if actions.len() != k_count {
            return Err(Error::InvalidAction(format!(
                "{} actions for {k_count} vehicles",
                actions.len()
            )));
        }
        for a in actions {
            if a.rsu_slot >= cfg.o_max || a.power_level >= cfg.power_levels {
                return Err(Error::InvalidAction(format!("{a:?} out of range")));
            }
        }

        let choices: Vec<Option<usize>> = actions
            .iter()
            .zip(&self.observations)
            .map(|(a, obs)| obs.slot_map.get(a.rsu_slot).or_else(|| obs.slot_map.first()).copied())
            .collect();

        let noise_w = cfg.noise_watts();
        let mut rates = vec![0.0; k_count];
        let mut ho_flags = vec![0u8; k_count];
        let mut tx_power_w = vec![0.0; k_count];
        for k in 0..k_count {
            let Some(r) = choices[k] else { continue };
            ho_flags[k] = handover_indicator(self.world.prev_assoc[k], r);
            if choices[..k].contains(&Some(r)) {
                continue;
            }
            tx_power_w[k] = cfg.power_watts(actions[k].power_level);
            rates[k] = achievable_rate(tx_power_w[k], self.gains[k][r], noise_w);
        }

        let violations = check_constraints(&choices, &rates, cfg.r_min);
        let utilities: Vec<f64> = (0..k_count)
            .map(|k| utility(rates[k], ho_flags[k], tx_power_w[k], cfg))
            .collect();
        let pat = utilities.iter().sum::<f64>() / k_count as f64;
        let penalty = if violations.is_empty() { 0.0 } else { cfg.penalty };
        let terminal = self.world.t >= cfg.horizon;

        self.world.prev_assoc.clone_from(&choices);
        self.world.t += 1;
        advance_mobility(&mut self.world, &self.cfg, &self.mean_speeds, &mut self.mobility_rng);
        self.resample_and_observe();

        Ok(StepResult {
            reward: pat + penalty,
            pat,
            utilities,
            rates,
            ho_flags,
            tx_power_w,
            associations: choices,
            violations,
            observations: self.observations.clone(),
            terminal,
        })
    }

    pub fn config(&self) -> &EnvConfig {
        &self.cfg
    }

    pub fn layout(&self) -> &RsuLayout {
        &self.layout
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn mean_speeds(&self) -> &[f64] {
        &self.mean_speeds
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    /// This slot's channel draws, `gains()[k][r]`.
    pub fn gains(&self) -> &[Vec<f64>] {
        &self.gains
    }

    /// Normalized learner inputs for the current slot.
    pub fn inputs(&self) -> Vec<Vec<f64>> {
        self.observations.iter().map(|o| o.to_input(&self.cfg)).collect()
    }
}

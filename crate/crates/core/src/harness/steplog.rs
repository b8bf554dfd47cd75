//! Optional per-slot log, written alongside the per-episode metrics.

use crate::env::{MultiAgentEnv, StepReport};
use crate::error::{Error, Result};

pub const STEP_HEADER: &str = "episode,t,pat,reward,rate,handovers,tx_power,penalized";

#[derive(Debug, Clone, PartialEq)]
pub struct StepRow {
    pub episode: u64,
    pub t: usize,
    pub pat: f64,
    pub reward: f64,
    pub rate: f64,
    pub handovers: f64,
    pub tx_power: f64,
    pub penalized: bool,
}

impl StepRow {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{:?},{:?},{:?},{:?},{:?},{}",
            self.episode, self.t, self.pat, self.reward, self.rate, self.handovers, self.tx_power, self.penalized as u8
        )
    }

    pub fn from_csv_row(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 8 {
            return Err(Error::Metrics(format!("step row has {} fields, expected 8", f.len())));
        }
        let float = |i: usize| {
            f[i].parse::<f64>()
                .map_err(|e| Error::Metrics(format!("field {i}: {e}")))
        };
        let int = |i: usize| {
            f[i].parse::<u64>()
                .map_err(|e| Error::Metrics(format!("field {i}: {e}")))
        };
        Ok(Self {
            episode: int(0)?,
            t: int(1)? as usize,
            pat: float(2)?,
            reward: float(3)?,
            rate: float(4)?,
            handovers: float(5)?,
            tx_power: float(6)?,
            penalized: int(7)? != 0,
        })
    }
}

pub fn steps_to_csv(rows: &[StepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(STEP_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

pub fn steps_from_csv(text: &str) -> Result<Vec<StepRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(STEP_HEADER) {
        return Err(Error::Metrics("missing or unexpected step log header".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(StepRow::from_csv_row)
        .collect()
}

/// Environment wrapper that records every step it forwards.
pub struct StepLogger<'a, E: MultiAgentEnv + ?Sized> {
    inner: &'a mut E,
    episode: u64,
    t: usize,
    pub rows: Vec<StepRow>,
}

impl<'a, E: MultiAgentEnv + ?Sized> StepLogger<'a, E> {
    pub fn new(inner: &'a mut E) -> Self {
        Self {
            inner,
            episode: 0,
            t: 0,
            rows: Vec::new(),
        }
    }
}

impl<E: MultiAgentEnv + ?Sized> MultiAgentEnv for StepLogger<'_, E> {
    fn num_agents(&self) -> usize {
        self.inner.num_agents()
    }

    fn obs_dim(&self) -> usize {
        self.inner.obs_dim()
    }

    fn num_actions(&self) -> usize {
        self.inner.num_actions()
    }

    fn horizon(&self) -> usize {
        self.inner.horizon()
    }

    fn reset_episode(&mut self, episode: u64) -> Vec<Vec<f64>> {
        self.episode = episode;
        self.t = 0;
        self.inner.reset_episode(episode)
    }

    fn step_joint(&mut self, actions: &[usize]) -> Result<StepReport> {
        let report = self.inner.step_joint(actions)?;
        self.rows.push(StepRow {
            episode: self.episode,
            t: self.t,
            pat: report.pat,
            reward: report.reward,
            rate: report.mean_rate,
            handovers: report.handovers,
            tx_power: report.mean_tx_power,
            penalized: report.penalized,
        });
        self.t += 1;
        Ok(report)
    }
}

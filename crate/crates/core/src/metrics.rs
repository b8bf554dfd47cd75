//! Per-episode metrics shared by every learner, and their CSV form.
//!
//! Metrics file: UTF-8, comma separated, one header row followed by one row
//! per episode with the columns of [`METRICS_HEADER`]. Floats are written in
//! Rust's shortest round-trip form, so every row parses back bit-exactly.

use serde::{Deserialize, Serialize};

use crate::env::StepReport;
use crate::error::{Error, Result};

pub const METRICS_HEADER: &str = "episode,pat,reward,rate,handovers,tx_power,violations,epsilon,lr";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    /// 1-based episode index.
    pub episode: usize,
    /// Mean over slots of the per-user average utility.
    pub pat: f64,
    /// Mean over slots of the reward (PAT plus penalty).
    pub reward: f64,
    /// Mean per-user rate (bit/s/Hz).
    pub rate: f64,
    /// Handovers per user over the episode.
    pub handovers: f64,
    /// Mean transmit power (W).
    pub tx_power: f64,
    /// Slots with at least one constraint violation.
    pub violations: usize,
    pub epsilon: f64,
    pub lr: f64,
}

impl EpisodeRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{:?},{:?},{:?},{:?},{:?},{},{:?},{:?}",
            self.episode,
            self.pat,
            self.reward,
            self.rate,
            self.handovers,
            self.tx_power,
            self.violations,
            self.epsilon,
            self.lr
        )
    }

    pub fn from_csv_row(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.trim_end().split(',').collect();
        if fields.len() != 9 {
            return Err(Error::Metrics(format!(
                "expected 9 columns, got {}: {line}",
                fields.len()
            )));
        }
        let f = |i: usize| -> Result<f64> {
            fields[i]
                .parse::<f64>()
                .map_err(|e| Error::Metrics(format!("column {i} of {line:?}: {e}")))
        };
        let u = |i: usize| -> Result<usize> {
            fields[i]
                .parse::<usize>()
                .map_err(|e| Error::Metrics(format!("column {i} of {line:?}: {e}")))
        };
        Ok(Self {
            episode: u(0)?,
            pat: f(1)?,
            reward: f(2)?,
            rate: f(3)?,
            handovers: f(4)?,
            tx_power: f(5)?,
            violations: u(6)?,
            epsilon: f(7)?,
            lr: f(8)?,
        })
    }

    pub fn is_finite(&self) -> bool {
        [
            self.pat,
            self.reward,
            self.rate,
            self.handovers,
            self.tx_power,
            self.epsilon,
            self.lr,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

pub fn records_to_csv(records: &[EpisodeRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(METRICS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

pub fn records_from_csv(text: &str) -> Result<Vec<EpisodeRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end() == METRICS_HEADER => {}
        other => return Err(Error::Metrics(format!("unexpected header {other:?}"))),
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(EpisodeRecord::from_csv_row)
        .collect()
}

/// Running sums over the slots of one episode.
#[derive(Debug, Clone, Default)]
pub struct EpisodeAccumulator {
    steps: usize,
    pat: f64,
    reward: f64,
    rate: f64,
    handovers: f64,
    tx_power: f64,
    violations: usize,
}

impl EpisodeAccumulator {
    pub fn push(&mut self, report: &StepReport) {
        self.steps += 1;
        self.pat += report.pat;
        self.reward += report.reward;
        self.rate += report.mean_rate;
        self.handovers += report.handovers;
        self.tx_power += report.mean_tx_power;
        self.violations += report.penalized as usize;
    }

    pub fn finish(&self, episode: usize, num_agents: usize, epsilon: f64, lr: f64) -> EpisodeRecord {
        let n = self.steps.max(1) as f64;
        EpisodeRecord {
            episode,
            pat: self.pat / n,
            reward: self.reward / n,
            rate: self.rate / n,
            handovers: self.handovers / num_agents as f64,
            tx_power: self.tx_power / n,
            violations: self.violations,
            epsilon,
            lr,
        }
    }
}

/// Location and spread summary of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub iqr: f64,
    pub std: f64,
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

impl SampleStats {
    pub fn of(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let (q1, q3) = (quantile(&sorted, 0.25), quantile(&sorted, 0.75));
        Self {
            count: n,
            mean,
            median: quantile(&sorted, 0.5),
            q1,
            q3,
            iqr: q3 - q1,
            std: var.sqrt(),
        }
    }
}

/// Window statistics over the last `window` episodes of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowSummary {
    pub first_episode: usize,
    pub last_episode: usize,
    pub pat: SampleStats,
    pub rate_mean: f64,
    pub handovers_mean: f64,
    pub tx_power_mean: f64,
    pub reward_mean: f64,
}

pub fn window_summary(records: &[EpisodeRecord], window: usize) -> Option<WindowSummary> {
    if records.is_empty() {
        return None;
    }
    let tail = &records[records.len().saturating_sub(window.max(1))..];
    let mean = |f: fn(&EpisodeRecord) -> f64| tail.iter().map(f).sum::<f64>() / tail.len() as f64;
    let pats: Vec<f64> = tail.iter().map(|r| r.pat).collect();
    Some(WindowSummary {
        first_episode: tail[0].episode,
        last_episode: tail[tail.len() - 1].episode,
        pat: SampleStats::of(&pats),
        rate_mean: mean(|r| r.rate),
        handovers_mean: mean(|r| r.handovers),
        tx_power_mean: mean(|r| r.tx_power),
        reward_mean: mean(|r| r.reward),
    })
}

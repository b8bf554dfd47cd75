//! Seeded runs of every configured algorithm and their output files.
//!
//! Layout of an output directory:
//! - `config.toml`: the resolved configuration
//! - `<algo>_seed<N>.csv`: per-episode metrics
//! - `<algo>_seed<N>_steps.csv`: per-slot log, when `verbose_steps` is set
//! - `<algo>_seed<N>.failed`: error message of a run that stopped early
//! - `checkpoints/proposed_seed<N>/`: trained federated networks
//! - `summary.toml`: one `[[runs]]` table per run with window statistics

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{Algorithm, ExperimentConfig};
use super::steplog::{steps_to_csv, StepLogger};
use crate::agents::{FederatedTrainer, IsolationAudit};
use crate::baselines::{CentralizedTrainer, IndependentTrainer};
use crate::env::{MultiAgentEnv, VehicularEnv};
use crate::error::{Error, Result};
use crate::metrics::{records_to_csv, window_summary, EpisodeRecord, WindowSummary};

pub const SUMMARY_FILE: &str = "summary.toml";

pub fn run_stem(algorithm: Algorithm, seed: u64) -> String {
    format!("{}_seed{seed}", algorithm.name())
}

pub fn metrics_path(dir: &Path, algorithm: Algorithm, seed: u64) -> PathBuf {
    dir.join(format!("{}.csv", run_stem(algorithm, seed)))
}

pub fn checkpoint_dir(dir: &Path, seed: u64) -> PathBuf {
    dir.join("checkpoints").join(run_stem(Algorithm::Proposed, seed))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Complete,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub status: RunStatus,
    pub episodes_completed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<IsolationAudit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<WindowSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub runs: Vec<RunSummary>,
}

impl ExperimentSummary {
    pub fn find(&self, algorithm: Algorithm, seed: u64) -> Option<&RunSummary> {
        self.runs.iter().find(|r| r.algorithm == algorithm && r.seed == seed)
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(SUMMARY_FILE);
        let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(toml::from_str(&text)?)
    }

    fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join(SUMMARY_FILE);
        let text = toml::to_string(self).map_err(|e| Error::Metrics(format!("cannot serialize summary: {e}")))?;
        fs::write(&path, text).map_err(|e| Error::io(&path, e))
    }
}

/// One trained run held in memory.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: RunSummary,
    pub records: Vec<EpisodeRecord>,
}

enum Learner {
    Proposed(Box<FederatedTrainer>),
    Centralized(Box<CentralizedTrainer>),
    Independent(Box<IndependentTrainer>),
}

impl Learner {
    fn new<E: MultiAgentEnv + ?Sized>(
        env: &E,
        cfg: &ExperimentConfig,
        algorithm: Algorithm,
        seed: u64,
    ) -> Result<Self> {
        let t = cfg.trainer.clone();
        Ok(match algorithm {
            Algorithm::Proposed => {
                let mut trainer = FederatedTrainer::new(env, t, seed)?;
                trainer.audit_isolation = cfg.audit_isolation;
                Learner::Proposed(Box::new(trainer))
            }
            Algorithm::Cdrl => Learner::Centralized(Box::new(CentralizedTrainer::new(env, t, seed)?)),
            Algorithm::Imarl => Learner::Independent(Box::new(IndependentTrainer::new(env, t, None, seed)?)),
            Algorithm::FmarlAvg => Learner::Independent(Box::new(IndependentTrainer::new(
                env,
                t,
                Some(cfg.fedavg.clone()),
                seed,
            )?)),
        })
    }

    fn run_episode<E: MultiAgentEnv + ?Sized>(&mut self, env: &mut E, episode: usize) -> Result<EpisodeRecord> {
        match self {
            Learner::Proposed(t) => t.run_episode(env, episode),
            Learner::Centralized(t) => t.run_episode(env, episode),
            Learner::Independent(t) => t.run_episode(env, episode),
        }
    }
}

fn train_all<E: MultiAgentEnv + ?Sized>(
    learner: &mut Learner,
    env: &mut E,
    episodes: usize,
    records: &mut Vec<EpisodeRecord>,
) -> Result<()> {
    for episode in 1..=episodes {
        let record = learner.run_episode(env, episode)?;
        if !record.is_finite() {
            return Err(Error::NonFinite("episode metrics"));
        }
        records.push(record);
    }
    Ok(())
}

/// Train one algorithm on one seed, writing its files into `dir`.
pub fn run_single(cfg: &ExperimentConfig, algorithm: Algorithm, seed: u64, dir: &Path) -> Result<RunOutcome> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let stem = run_stem(algorithm, seed);
    let mut env = VehicularEnv::new(cfg.env.clone(), seed)?;
    let mut learner = Learner::new(&env, cfg, algorithm, seed)?;
    let mut records = Vec::with_capacity(cfg.trainer.episodes);

    let result = if cfg.verbose_steps {
        let mut logged = StepLogger::new(&mut env);
        let res = train_all(&mut learner, &mut logged, cfg.trainer.episodes, &mut records);
        let path = dir.join(format!("{stem}_steps.csv"));
        fs::write(&path, steps_to_csv(&logged.rows)).map_err(|e| Error::io(&path, e))?;
        res
    } else {
        train_all(&mut learner, &mut env, cfg.trainer.episodes, &mut records)
    };

    let path = metrics_path(dir, algorithm, seed);
    fs::write(&path, records_to_csv(&records)).map_err(|e| Error::io(&path, e))?;
    let failed_marker = dir.join(format!("{stem}.failed"));
    let audit = match &learner {
        Learner::Proposed(t) if cfg.audit_isolation => Some(t.audit()),
        _ => None,
    };
    let mut summary = RunSummary {
        algorithm,
        seed,
        status: RunStatus::Complete,
        episodes_completed: records.len(),
        error: None,
        audit,
        window: window_summary(&records, cfg.eval_window),
    };
    match result {
        Ok(()) => {
            if failed_marker.exists() {
                fs::remove_file(&failed_marker).map_err(|e| Error::io(&failed_marker, e))?;
            }
            if let (Learner::Proposed(t), true) = (&learner, cfg.checkpoint) {
                t.save(&checkpoint_dir(dir, seed))?;
            }
        }
        Err(e) => {
            let message = e.to_string();
            fs::write(&failed_marker, format!("{message}\n")).map_err(|e| Error::io(&failed_marker, e))?;
            summary.status = RunStatus::Failed;
            summary.error = Some(message);
        }
    }
    Ok(RunOutcome { summary, records })
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub dir: PathBuf,
    pub runs: Vec<RunOutcome>,
}

impl ExperimentReport {
    pub fn summary(&self) -> ExperimentSummary {
        ExperimentSummary {
            runs: self.runs.iter().map(|r| r.summary.clone()).collect(),
        }
    }

    pub fn find(&self, algorithm: Algorithm, seed: u64) -> Option<&RunOutcome> {
        self.runs
            .iter()
            .find(|r| r.summary.algorithm == algorithm && r.summary.seed == seed)
    }
}

/// Run every algorithm on every seed. A run that fails leaves its partial
/// metrics, a `.failed` marker and a failed summary entry; the error is
/// returned after the summary is written.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let dir = cfg.out_dir.clone();
    cfg.echo(&dir)?;
    let mut runs = Vec::with_capacity(cfg.algorithms.len() * cfg.seeds.len());
    let mut first_error = None;
    'outer: for &algorithm in &cfg.algorithms {
        for &seed in &cfg.seeds {
            let outcome = run_single(cfg, algorithm, seed, &dir)?;
            let failed = outcome.summary.status == RunStatus::Failed;
            if failed {
                first_error = outcome
                    .summary
                    .error
                    .clone()
                    .map(|m| format!("{} seed {seed}: {m}", algorithm.name()));
            }
            runs.push(outcome);
            if failed {
                break 'outer;
            }
        }
    }
    let report = ExperimentReport { dir, runs };
    report.summary().write(&report.dir)?;
    match first_error {
        Some(message) => Err(Error::RunFailed(message)),
        None => Ok(report),
    }
}

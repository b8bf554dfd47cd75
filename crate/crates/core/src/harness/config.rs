use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::agents::TrainerConfig;
use crate::baselines::{BaselineKind, FedAvgConfig};
use crate::env::EnvConfig;
use crate::error::{Error, Result};

/// Name of the resolved configuration written into every output directory.
pub const RESOLVED_CONFIG_FILE: &str = "config.toml";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Federated α/β learners with noised Q-value sharing.
    Proposed,
    Cdrl,
    Imarl,
    FmarlAvg,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Proposed,
        Algorithm::Cdrl,
        Algorithm::Imarl,
        Algorithm::FmarlAvg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Proposed => "proposed",
            Algorithm::Cdrl => "cdrl",
            Algorithm::Imarl => "imarl",
            Algorithm::FmarlAvg => "fmarl-avg",
        }
    }

    pub fn baseline(self) -> Option<BaselineKind> {
        match self {
            Algorithm::Proposed => None,
            Algorithm::Cdrl => Some(BaselineKind::Cdrl),
            Algorithm::Imarl => Some(BaselineKind::Imarl),
            Algorithm::FmarlAvg => Some(BaselineKind::FmarlAvg),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub out_dir: PathBuf,
    /// Final episodes summarized per run.
    pub eval_window: usize,
    /// Also write one row per time slot.
    pub verbose_steps: bool,
    /// Save the federated trainer after training.
    pub checkpoint: bool,
    /// Fingerprint the opposite local network around every federated update.
    pub audit_isolation: bool,
    pub env: EnvConfig,
    pub trainer: TrainerConfig,
    pub fedavg: FedAvgConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seeds: vec![1],
            algorithms: vec![Algorithm::Proposed],
            out_dir: PathBuf::from("runs"),
            eval_window: 100,
            verbose_steps: false,
            checkpoint: true,
            audit_isolation: false,
            env: EnvConfig::default(),
            trainer: TrainerConfig::default(),
            fedavg: FedAvgConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        self.trainer.validate()?;
        self.fedavg.validate()?;
        if self.seeds.is_empty() {
            return Err(Error::config("at least one seed is required"));
        }
        if has_duplicates(&self.seeds) {
            return Err(Error::config("seeds must be distinct"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("at least one algorithm is required"));
        }
        if has_duplicates(&self.algorithms) {
            return Err(Error::config("algorithms must be distinct"));
        }
        if self.eval_window == 0 || self.eval_window > self.trainer.episodes {
            return Err(Error::config(format!(
                "eval_window must be in [1, episodes = {}], got {}",
                self.trainer.episodes, self.eval_window
            )));
        }
        if self.algorithms.contains(&Algorithm::Proposed) && self.env.num_vehicles != 2 {
            return Err(Error::config("the proposed method needs exactly two vehicles"));
        }
        Ok(())
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::config(format!("cannot serialize configuration: {e}")))
    }

    /// Write the resolved configuration into `dir`.
    pub fn echo(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join(RESOLVED_CONFIG_FILE);
        fs::write(&path, self.to_toml_string()?).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

fn has_duplicates<T: Ord + Clone>(items: &[T]) -> bool {
    let mut sorted = items.to_vec();
    sorted.sort();
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Parse and validate a configuration file. Missing keys take defaults.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ExperimentConfig::from_toml_str(&text)
}

//! One experiment per value of a swept parameter, consolidated into a
//! long-format table.

use std::fmt;
use std::fs;
use std::path::PathBuf;

use super::config::{Algorithm, ExperimentConfig};
use super::run::{run_experiment, ExperimentReport};
use crate::error::{Error, Result};

pub const SWEEP_HEADER: &str =
    "axis,value,algorithm,seed,pat_mean,pat_median,pat_q1,pat_q3,pat_iqr,pat_std,rate,handovers,tx_power";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAxis {
    /// Total RSU count, split evenly between the two road sides.
    #[value(name = "rsus")]
    NumRsus,
    /// Noise level of the shared Q-values; runs the proposed method only.
    #[value(name = "sigma")]
    DpSigma,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::NumRsus => "num_rsus",
            SweepAxis::DpSigma => "dp_sigma",
        }
    }

    /// Configuration of the sub-experiment for `value`.
    pub fn apply(self, base: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut cfg = base.clone();
        match self {
            SweepAxis::NumRsus => {
                if value.fract() != 0.0 || value < 1.0 {
                    return Err(Error::config(format!(
                        "RSU count must be a positive integer, got {value}"
                    )));
                }
                cfg.env.num_rsus = value as usize;
                cfg.out_dir = base.out_dir.join(format!("rsus_{}", value as usize));
            }
            SweepAxis::DpSigma => {
                cfg.trainer.dp_sigma = value;
                cfg.algorithms = vec![Algorithm::Proposed];
                cfg.out_dir = base.out_dir.join(format!("sigma_{value}"));
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub pat_mean: f64,
    pub pat_median: f64,
    pub pat_q1: f64,
    pub pat_q3: f64,
    pub pat_iqr: f64,
    pub pat_std: f64,
    pub rate: f64,
    pub handovers: f64,
    pub tx_power: f64,
}

impl SweepRow {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{:?},{},{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
            self.axis.name(),
            self.value,
            self.algorithm.name(),
            self.seed,
            self.pat_mean,
            self.pat_median,
            self.pat_q1,
            self.pat_q3,
            self.pat_iqr,
            self.pat_std,
            self.rate,
            self.handovers,
            self.tx_power
        )
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub table: PathBuf,
    pub rows: Vec<SweepRow>,
    pub experiments: Vec<(f64, ExperimentReport)>,
}

fn rows_of(axis: SweepAxis, value: f64, report: &ExperimentReport) -> Result<Vec<SweepRow>> {
    report
        .runs
        .iter()
        .map(|run| {
            let s = &run.summary;
            let w = s
                .window
                .ok_or_else(|| Error::RunFailed(format!("{} seed {} produced no episodes", s.algorithm, s.seed)))?;
            Ok(SweepRow {
                axis,
                value,
                algorithm: s.algorithm,
                seed: s.seed,
                pat_mean: w.pat.mean,
                pat_median: w.pat.median,
                pat_q1: w.pat.q1,
                pat_q3: w.pat.q3,
                pat_iqr: w.pat.iqr,
                pat_std: w.pat.std,
                rate: w.rate_mean,
                handovers: w.handovers_mean,
                tx_power: w.tx_power_mean,
            })
        })
        .collect()
}

/// Run `base` once per value and write `sweep_<axis>.csv` into its output
/// directory.
pub fn sweep(base: &ExperimentConfig, axis: SweepAxis, values: &[f64]) -> Result<SweepReport> {
    if values.is_empty() {
        return Err(Error::config("a sweep needs at least one value"));
    }
    let configs = values
        .iter()
        .map(|&v| axis.apply(base, v))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut experiments = Vec::with_capacity(values.len());
    for (&value, cfg) in values.iter().zip(&configs) {
        let report = run_experiment(cfg)?;
        rows.extend(rows_of(axis, value, &report)?);
        experiments.push((value, report));
    }
    fs::create_dir_all(&base.out_dir).map_err(|e| Error::io(&base.out_dir, e))?;
    let table = base.out_dir.join(format!("sweep_{}.csv", axis.name()));
    let mut text = String::from(SWEEP_HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&row.to_csv_row());
        text.push('\n');
    }
    fs::write(&table, text).map_err(|e| Error::io(&table, e))?;
    Ok(SweepReport {
        table,
        rows,
        experiments,
    })
}

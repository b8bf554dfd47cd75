//! Experiment configuration, seeded runs, metric aggregation and sweeps.

pub mod config;
pub mod run;
pub mod steplog;
pub mod sweep;

pub use config::{load_config, Algorithm, ExperimentConfig, RESOLVED_CONFIG_FILE};
pub use run::{
    checkpoint_dir, metrics_path, run_experiment, run_single, run_stem, ExperimentReport, ExperimentSummary,
    RunOutcome, RunStatus, RunSummary, SUMMARY_FILE,
};
pub use steplog::{steps_from_csv, steps_to_csv, StepLogger, StepRow, STEP_HEADER};
pub use sweep::{sweep, SweepAxis, SweepReport, SweepRow, SWEEP_HEADER};

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use jeapa::agents::FederatedTrainer;
use jeapa::env::VehicularEnv;
use jeapa::harness::{
    checkpoint_dir, load_config, run_experiment, run_stem, sweep, Algorithm, ExperimentConfig, SweepAxis,
};
use jeapa::metrics::{records_to_csv, window_summary};
use jeapa::{Error, Result};

/// Train and compare edge-association and power-allocation learners on the
/// vehicular network simulator.
#[derive(Debug, Parser)]
#[command(name = "jeapa", version)]
struct Cli {
    /// TOML configuration; missing keys take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Algorithm to run; repeat to run several.
    #[arg(long = "algo", value_enum)]
    algos: Vec<Algorithm>,
    /// Seed to run; repeat to run several.
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    #[arg(long)]
    episodes: Option<usize>,
    /// Standard deviation of the noise on shared Q-values.
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    num_rsus: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, requires = "values")]
    sweep: Option<SweepAxis>,
    /// Comma-separated values of the swept parameter.
    #[arg(long, value_delimiter = ',', requires = "sweep")]
    values: Vec<f64>,
    /// Greedy evaluation of saved federated checkpoints instead of training.
    #[arg(long, conflicts_with = "sweep")]
    eval: bool,
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if !cli.algos.is_empty() {
        cfg.algorithms = cli.algos.clone();
    }
    if !cli.seeds.is_empty() {
        cfg.seeds = cli.seeds.clone();
    }
    if let Some(episodes) = cli.episodes {
        cfg.trainer.episodes = episodes;
        if cfg.eval_window > episodes {
            eprintln!("note: evaluation window reduced to {episodes} episodes");
            cfg.eval_window = episodes;
        }
    }
    if let Some(sigma) = cli.sigma {
        cfg.trainer.dp_sigma = sigma;
    }
    if let Some(r) = cli.num_rsus {
        cfg.env.num_rsus = r;
    }
    if let Some(out) = &cli.out {
        cfg.out_dir = out.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn evaluate(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.algorithms != [Algorithm::Proposed] {
        return Err(Error::config(
            "--eval restores federated checkpoints and only supports --algo proposed",
        ));
    }
    for &seed in &cfg.seeds {
        let trainer_dir = checkpoint_dir(&cfg.out_dir, seed);
        let mut trainer = FederatedTrainer::load(&trainer_dir)?;
        let mut env = VehicularEnv::new(cfg.env.clone(), seed)?;
        let records = trainer.evaluate(&mut env, cfg.eval_window)?;
        let path = cfg
            .out_dir
            .join(format!("{}_eval.csv", run_stem(Algorithm::Proposed, seed)));
        fs::write(&path, records_to_csv(&records)).map_err(|e| Error::io(&path, e))?;
        if let Some(w) = window_summary(&records, records.len()) {
            println!(
                "proposed seed {seed}: greedy PAT mean {:.4} median {:.4}",
                w.pat.mean, w.pat.median
            );
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = resolve(cli)?;
    if cli.eval {
        return evaluate(&cfg);
    }
    if let Some(axis) = cli.sweep {
        let report = sweep(&cfg, axis, &cli.values)?;
        for row in &report.rows {
            println!(
                "{}={} {} seed {}: PAT mean {:.4} median {:.4} iqr {:.4}",
                axis, row.value, row.algorithm, row.seed, row.pat_mean, row.pat_median, row.pat_iqr
            );
        }
        println!("table: {}", report.table.display());
        return Ok(());
    }
    let report = run_experiment(&cfg)?;
    for run in &report.runs {
        if let Some(w) = &run.summary.window {
            println!(
                "{} seed {}: PAT mean {:.4} median {:.4} over episodes {}-{}",
                run.summary.algorithm, run.summary.seed, w.pat.mean, w.pat.median, w.first_episode, w.last_episode
            );
        }
    }
    println!("outputs: {}", report.dir.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

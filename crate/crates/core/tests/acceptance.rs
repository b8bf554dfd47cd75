//! Acceptance suite: one PASS/FAIL line per criterion. Criteria 4-7 and 10
//! share one full-scale experiment grid, computed once.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use jeapa::agents::{
    FederatedAgentPair, FederatedBatch, FederatedTrainer, IsolationAudit, JointTransition, Side, TrainerConfig,
};
use jeapa::baselines::{split_joint, CentralizedTrainer, IndependentTrainer};
use jeapa::env::mobility::advance_mobility;
use jeapa::env::{
    channel::mean_channel_gain, sample_channel_gain, AgentAction, EnvConfig, MatrixGame, Vehicle, VehicularEnv,
    WorldState,
};
use jeapa::harness::{run_single, Algorithm, ExperimentConfig};
use jeapa::metrics::{quantile, records_to_csv, EpisodeRecord};
use jeapa::nn::{Activation, DenseNet, GradientSet, Matrix};
use jeapa::rng::{stream, Stream, StreamRng};
use rand::Rng;

const GRID_SEEDS: [u64; 3] = [1, 2, 3];
const SIGMA_SEEDS: [u64; 5] = [1, 2, 3, 4, 5];
const RSU_VALUES: [usize; 3] = [8, 12, 16];
const SIGMA_VALUES: [f64; 3] = [0.0, 1.0, 2.0];
const WINDOW: usize = 100;

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("{} [{id}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn window_pats(records: &[EpisodeRecord]) -> Vec<f64> {
    records[records.len() - WINDOW..].iter().map(|r| r.pat).collect()
}

// ---------------------------------------------------------------- criterion 1

fn rel_err(a: f64, n: f64) -> f64 {
    let scale = a.abs().max(n.abs());
    if scale < 1e-10 {
        0.0
    } else {
        (a - n).abs() / scale
    }
}

fn flatten(g: &GradientSet) -> Vec<f64> {
    g.layers
        .iter()
        .flat_map(|l| l.weights.iter().chain(&l.bias).copied())
        .collect()
}

fn jitter_biases(net: &mut DenseNet, rng: &mut StreamRng) {
    for layer in net.layers_mut() {
        layer.bias.iter_mut().for_each(|b| *b = rng.random_range(-0.5..0.5));
    }
}

fn max_fd_error(net: &DenseNet, analytic: &[f64], loss: impl Fn(&DenseNet) -> f64) -> f64 {
    const H: f64 = 1e-5;
    let mut worst: f64 = 0.0;
    for (i, &a) in analytic.iter().enumerate() {
        let mut plus = net.clone();
        *plus.parameters_mut().nth(i).unwrap() += H;
        let mut minus = net.clone();
        *minus.parameters_mut().nth(i).unwrap() -= H;
        worst = worst.max(rel_err(a, (loss(&plus) - loss(&minus)) / (2.0 * H)));
    }
    worst
}

fn random_matrix(rows: usize, cols: usize, rng: &mut StreamRng) -> Matrix {
    Matrix::from_vec(
        rows,
        cols,
        (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect(),
    )
}

fn weighted_output(net: &DenseNet, x: &Matrix, w: &Matrix) -> f64 {
    let y = net.forward_batch(x).unwrap();
    y.as_slice().iter().zip(w.as_slice()).map(|(a, b)| a * b).sum()
}

fn criterion_gradients(report: &mut Report) {
    let start = Instant::now();
    let mut rng = stream(2024, Stream::Init, 0);
    let acts = [Activation::Relu, Activation::Tanh];
    let (mut local_err, mut mlp_err, mut composed_err) = (0.0f64, 0.0f64, 0.0f64);
    let instances = 20;
    for case in 0..instances {
        let act = acts[case % 2];
        let num_actions = rng.random_range(2..4);
        let obs_dim = rng.random_range(2..6);
        let local_dims = vec![obs_dim, rng.random_range(3..8), rng.random_range(3..8), num_actions];
        let mlp_dims = vec![2 * num_actions, rng.random_range(3..8), num_actions * num_actions];
        for (dims, err) in [(&local_dims, &mut local_err), (&mlp_dims, &mut mlp_err)] {
            let mut net = DenseNet::init(dims, act, &mut rng).unwrap();
            jitter_biases(&mut net, &mut rng);
            let x = random_matrix(3, dims[0], &mut rng);
            let w = random_matrix(3, *dims.last().unwrap(), &mut rng);
            let (_, cache) = net.forward_cached(&x).unwrap();
            let (g, _) = net.backward(&cache, &w).unwrap();
            *err = err.max(max_fd_error(&net, &flatten(&g), |n| weighted_output(n, &x, &w)));
        }

        let cfg = TrainerConfig {
            hidden: local_dims[1..3].to_vec(),
            mlp_hidden: vec![mlp_dims[1]],
            activation: act,
            ..TrainerConfig::default()
        };
        let mut pair = FederatedAgentPair::new(obs_dim, num_actions, &cfg, &mut rng).unwrap();
        jitter_biases(&mut pair.alpha, &mut rng);
        jitter_biases(&mut pair.beta, &mut rng);
        jitter_biases(&mut pair.mlp, &mut rng);
        let items: Vec<JointTransition> = (0..4)
            .map(|_| {
                let mut v = || (0..obs_dim).map(|_| rng.random_range(0.0..1.0)).collect::<Vec<f64>>();
                let (o, n) = ([v(), v()], [v(), v()]);
                JointTransition {
                    obs: o,
                    actions: [rng.random_range(0..num_actions), rng.random_range(0..num_actions)],
                    reward: rng.random_range(-1.0..2.0),
                    next_obs: n,
                    terminal: false,
                }
            })
            .collect();
        let batch = FederatedBatch::from_transitions(&items.iter().collect::<Vec<_>>());
        let targets: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        for side in [Side::Alpha, Side::Beta] {
            let shared = pair.shared_peer_batch(side, &batch, 1.0, &mut rng).unwrap();
            let g = pair.side_gradients(side, &batch, &targets, &shared).unwrap();
            let loss = |p: &FederatedAgentPair| p.side_gradients(side, &batch, &targets, &shared).unwrap().loss;
            let local = if side == Side::Alpha { &pair.alpha } else { &pair.beta };
            let e_local = max_fd_error(local, &flatten(&g.local), |n| {
                let mut p = pair.clone();
                match side {
                    Side::Alpha => p.alpha = n.clone(),
                    Side::Beta => p.beta = n.clone(),
                }
                loss(&p)
            });
            let e_mlp = max_fd_error(&pair.mlp, &flatten(&g.mlp), |n| {
                let mut p = pair.clone();
                p.mlp = n.clone();
                loss(&p)
            });
            composed_err = composed_err.max(e_local).max(e_mlp);
        }
    }
    let elapsed = start.elapsed();
    let worst = local_err.max(mlp_err).max(composed_err);
    report.line(
        1,
        "gradient correctness",
        worst < 1e-4 && elapsed < Duration::from_secs(10),
        format!(
            "{instances} instances; max rel err local {local_err:.2e}, federated {mlp_err:.2e}, composed {composed_err:.2e} (< 1e-4); {:.1} s (< 10 s)",
            elapsed.as_secs_f64()
        ),
    );
}

// ---------------------------------------------------------------- criterion 2

fn oracle_slot(env: &VehicularEnv, actions: &[(usize, usize)], prev: &[Option<usize>]) -> (f64, Vec<Option<usize>>) {
    let noise_w = 10f64.powf((-114.0 - 30.0) / 10.0);
    let p_max_w = 10f64.powf((35.0 - 30.0) / 10.0);
    let mut chosen = Vec::new();
    for (k, v) in env.world().vehicles.iter().enumerate() {
        let mut in_range: Vec<(f64, usize)> = env
            .layout()
            .rsus()
            .iter()
            .map(|r| {
                (
                    ((v.x - r.position.x).powi(2) + (v.y - r.position.y).powi(2)).sqrt(),
                    r.id,
                )
            })
            .filter(|(d, _)| *d <= 200.0)
            .collect();
        in_range.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        in_range.truncate(4);
        let slot = actions[k].0;
        chosen.push(match in_range.get(slot).or(in_range.first()) {
            Some(&(_, id)) => Some(id),
            None => None,
        });
    }
    let (mut total, mut violated) = (0.0, false);
    for k in 0..chosen.len() {
        let (mut rate, mut power, mut ho) = (0.0, 0.0, 0.0);
        if let Some(r) = chosen[k] {
            if matches!(prev[k], Some(p) if p != r) {
                ho = 1.0;
            }
            if chosen[..k].contains(&Some(r)) {
                violated = true;
            } else {
                power = 10f64.powf((23.0 + 4.0 * actions[k].1 as f64 - 30.0) / 10.0);
                rate = (1.0 + power * env.gains()[k][r] / noise_w).log2();
            }
        }
        violated |= rate < 8.0;
        total += 0.5 * rate / 8.0 - 0.25 * ho - 0.25 * power / p_max_w;
    }
    let pat = total / chosen.len() as f64;
    (if violated { pat - 1.0 } else { pat }, chosen)
}

fn criterion_oracle(report: &mut Report) {
    let mut env = VehicularEnv::new(EnvConfig::default(), 77).unwrap();
    env.reset(3);
    let mut prev = vec![None, None];
    let (mut expected, mut got) = (0.0, 0.0);
    for t in 0..10 {
        let acts = [(t % 4, (t * 3) % 4), ((t + 2) % 4, (t + 1) % 4)];
        let (r, next) = oracle_slot(&env, &acts, &prev);
        expected += r;
        prev = next;
        let actions: Vec<AgentAction> = acts
            .iter()
            .map(|&(rsu_slot, power_level)| AgentAction { rsu_slot, power_level })
            .collect();
        got += env.step(&actions).unwrap().reward;
    }
    let diff = (expected - got).abs();
    report.line(
        2,
        "oracle equivalence",
        diff <= 1e-9,
        format!("10-slot cumulative reward {got:.12} vs oracle {expected:.12}, |diff| {diff:.1e} (<= 1e-9)"),
    );
}

// ---------------------------------------------------------------- criterion 3

fn toy_game() -> MatrixGame {
    let own = [0.1, 0.3, 1.0];
    let peer = [0.2, 0.9, 0.0];
    let rewards = (0..9)
        .map(|j| own[j / 3] + peer[j % 3] + 0.05 * ((j * 7) % 3) as f64)
        .collect();
    MatrixGame::new(3, rewards, 4).unwrap()
}

fn toy_config() -> TrainerConfig {
    TrainerConfig {
        gamma: 0.0,
        dp_sigma: 0.0,
        epsilon: 1.0,
        epsilon_end: Some(0.0),
        epsilon_decay_episodes: 800,
        episodes: 1500,
        batch_size: 16,
        lr_start: 0.02,
        lr_end: 0.005,
        lr_decay_episodes: 1500,
        target_sync_period: 50,
        hidden: vec![16, 16],
        mlp_hidden: vec![16],
        ..TrainerConfig::default()
    }
}

fn criterion_toy(report: &mut Report) {
    let start = Instant::now();
    let game = toy_game();
    let best = game.best_joint_action();
    let cfg = toy_config();
    let inputs = game.inputs().to_vec();

    let mut env = game.clone();
    let mut proposed = FederatedTrainer::new(&env, cfg.clone(), 1).unwrap();
    proposed.train(&mut env, |_| {}).unwrap();
    let p = proposed.select_actions(&inputs, 0.0).unwrap();

    let mut env = game.clone();
    let mut cdrl = CentralizedTrainer::new(&env, cfg.clone(), 1).unwrap();
    let mut imarl = IndependentTrainer::new(&env, cfg.clone(), None, 1).unwrap();
    for e in 1..=cfg.episodes {
        cdrl.run_episode(&mut env, e).unwrap();
        imarl.run_episode(&mut env, e).unwrap();
    }
    let c = split_joint(cdrl.greedy_joint_action(&inputs).unwrap(), 3, 2);
    let i = imarl.greedy_actions(&inputs).unwrap();
    let elapsed = start.elapsed();
    let ok = p == best && c == vec![best.0, best.1] && i == vec![best.0, best.1];
    report.line(
        3,
        "toy-MDP convergence",
        ok && elapsed < Duration::from_secs(120),
        format!(
            "optimum {best:?}; proposed {p:?}, cdrl {c:?}, imarl {i:?}; {:.1} s (< 120 s)",
            elapsed.as_secs_f64()
        ),
    );
}

// ---------------------------------------------------------------- shared grid

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    rsus: usize,
    sigma_milli: u64,
    algorithm: Algorithm,
    seed: u64,
}

struct GridRun {
    records: Vec<EpisodeRecord>,
    audit: Option<IsolationAudit>,
    elapsed: Duration,
}

struct Grid {
    root: PathBuf,
    runs: BTreeMap<Key, GridRun>,
}

impl Grid {
    fn config(rsus: usize, sigma: f64, dir: &Path) -> ExperimentConfig {
        let mut cfg = ExperimentConfig {
            out_dir: dir.to_path_buf(),
            eval_window: WINDOW,
            checkpoint: false,
            audit_isolation: true,
            ..ExperimentConfig::default()
        };
        cfg.env.num_rsus = rsus;
        cfg.trainer.dp_sigma = sigma;
        cfg
    }

    fn get(&mut self, rsus: usize, sigma: f64, algorithm: Algorithm, seed: u64) -> &GridRun {
        // Baselines never see the noise level.
        let sigma = if algorithm == Algorithm::Proposed { sigma } else { 0.0 };
        let key = Key {
            rsus,
            sigma_milli: (sigma * 1000.0).round() as u64,
            algorithm,
            seed,
        };
        let root = self.root.clone();
        self.runs.entry(key).or_insert_with(|| {
            let dir = root.join(format!("rsus{rsus}_sigma{sigma}"));
            let cfg = Grid::config(rsus, sigma, &dir);
            let start = Instant::now();
            let outcome = run_single(&cfg, algorithm, seed, &dir).expect("grid run");
            let elapsed = start.elapsed();
            let pats = window_pats(&outcome.records);
            let noise = if algorithm == Algorithm::Proposed {
                format!(" sigma={sigma}")
            } else {
                String::new()
            };
            eprintln!(
                "    grid: {algorithm} R={rsus}{noise} seed {seed}: window PAT {:.4} ({:.0} s)",
                mean(&pats),
                elapsed.as_secs_f64()
            );
            GridRun {
                records: outcome.records,
                audit: outcome.summary.audit,
                elapsed,
            }
        })
    }

    fn window_mean(&mut self, rsus: usize, sigma: f64, algorithm: Algorithm, seed: u64) -> f64 {
        mean(&window_pats(&self.get(rsus, sigma, algorithm, seed).records))
    }
}

fn criterion_learning(report: &mut Report, grid: &mut Grid) {
    let mut details = Vec::new();
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    for seed in GRID_SEEDS {
        let run = grid.get(12, 1.0, Algorithm::Proposed, seed);
        let pats: Vec<f64> = run.records.iter().map(|r| r.pat).collect();
        let early = mean(&pats[..100]);
        let late = mean(&pats[400..500]);
        ok &= pats.len() == 500 && late > early;
        slowest = slowest.max(run.elapsed);
        details.push(format!("seed {seed}: {early:.4} -> {late:.4}"));
    }
    ok &= slowest < Duration::from_secs(20 * 60);
    report.line(
        4,
        "learning trend",
        ok,
        format!(
            "mean PAT episodes 1-100 -> 401-500: {}; slowest seed {:.0} s (< 1200 s)",
            details.join(", "),
            slowest.as_secs_f64()
        ),
    );
}

fn criterion_ranking(report: &mut Report, grid: &mut Grid) {
    let mut wins = 0;
    let mut details = Vec::new();
    for seed in GRID_SEEDS {
        let p = grid.window_mean(12, 1.0, Algorithm::Proposed, seed);
        let c = grid.window_mean(12, 1.0, Algorithm::Cdrl, seed);
        let i = grid.window_mean(12, 1.0, Algorithm::Imarl, seed);
        let f = grid.window_mean(12, 1.0, Algorithm::FmarlAvg, seed);
        if p >= c && p >= i {
            wins += 1;
        }
        details.push(format!(
            "seed {seed}: proposed {p:.4} cdrl {c:.4} imarl {i:.4} (fmarl-avg {f:.4})"
        ));
    }
    report.line(
        5,
        "ranking trend",
        wins * 2 > GRID_SEEDS.len(),
        format!(
            "proposed >= cdrl and imarl in {wins}/{} seeds at R=12; {}",
            GRID_SEEDS.len(),
            details.join("; ")
        ),
    );
}

fn criterion_density(report: &mut Report, grid: &mut Grid) {
    let mut ok = true;
    let mut details = Vec::new();
    for algorithm in Algorithm::ALL {
        let curve: Vec<f64> = RSU_VALUES
            .iter()
            .map(|&r| {
                mean(
                    &GRID_SEEDS
                        .iter()
                        .map(|&s| grid.window_mean(r, 1.0, algorithm, s))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let monotone = curve.windows(2).all(|w| w[1] >= w[0] - 0.05 * w[0].abs());
        ok &= monotone;
        details.push(format!(
            "{algorithm} {}{}",
            curve.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(" -> "),
            if monotone { "" } else { " (decreasing)" }
        ));
    }
    report.line(
        6,
        "RSU-density trend",
        ok,
        format!(
            "seed-mean window PAT over R = 8, 12, 16 (5% slack per step): {}",
            details.join("; ")
        ),
    );
}

fn median_iqr(values: &[f64]) -> (f64, f64) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    (
        quantile(&sorted, 0.5),
        quantile(&sorted, 0.75) - quantile(&sorted, 0.25),
    )
}

fn criterion_privacy(report: &mut Report, grid: &mut Grid) {
    // Gate on the per-seed window means; the pooled episode PATs are
    // reported alongside.
    let mut per_seed = Vec::new();
    let mut pooled = Vec::new();
    for sigma in SIGMA_VALUES {
        let means: Vec<f64> = SIGMA_SEEDS
            .iter()
            .map(|&s| grid.window_mean(12, sigma, Algorithm::Proposed, s))
            .collect();
        let episodes: Vec<f64> = SIGMA_SEEDS
            .iter()
            .flat_map(|&s| window_pats(&grid.get(12, sigma, Algorithm::Proposed, s).records))
            .collect();
        per_seed.push((sigma, median_iqr(&means)));
        pooled.push((sigma, median_iqr(&episodes)));
    }
    let fmt = |stats: &[(f64, (f64, f64))]| {
        stats
            .iter()
            .map(|(s, (m, q))| format!("sigma {s}: median {m:.4} IQR {q:.4}"))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let (s0, s2) = (per_seed[0].1, per_seed[2].1);
    report.line(
        7,
        "privacy-accuracy trend",
        s2.0 <= s0.0 && s2.1 >= s0.1,
        format!(
            "window PAT over {} seeds: {}; pooled window episodes (not gated): {}",
            SIGMA_SEEDS.len(),
            fmt(&per_seed),
            fmt(&pooled)
        ),
    );
}

// ---------------------------------------------------------------- criterion 8

fn criterion_statistics(report: &mut Report) {
    let mut rng = stream(8, Stream::Fading, 0);
    let mut worst_gain: f64 = 0.0;
    for d in [0.01, 0.05, 0.1, 0.2] {
        let n = 100_000;
        let m = (0..n).map(|_| sample_channel_gain(d, &mut rng)).sum::<f64>() / n as f64;
        worst_gain = worst_gain.max((m / mean_channel_gain(d) - 1.0).abs());
    }

    let mut cfg = EnvConfig::default();
    let (mut worst_mean, mut worst_std): (f64, f64) = (0.0, 0.0);
    for memory in [0.1, 0.5, 0.9] {
        cfg.memory_depth = memory;
        let v_bar = 7.5;
        let mut world = WorldState {
            vehicles: vec![Vehicle {
                x: 0.0,
                y: 0.0,
                speed: v_bar,
                lane: 0,
            }],
            prev_assoc: vec![None],
            t: 1,
        };
        let mut rng = stream(8, Stream::Mobility, (memory * 10.0) as u64);
        let n = 1_000_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            advance_mobility(&mut world, &cfg, &[v_bar], &mut rng);
            let v = world.vehicles[0].speed;
            s1 += v;
            s2 += v * v;
        }
        let m = s1 / n as f64;
        let sd = (s2 / n as f64 - m * m).sqrt();
        worst_mean = worst_mean.max((m / v_bar - 1.0).abs());
        worst_std = worst_std.max((sd / cfg.speed_std - 1.0).abs());
    }
    report.line(
        8,
        "statistical environment checks",
        worst_gain < 0.02 && worst_mean < 0.01 && worst_std < 0.02,
        format!(
            "gain mean dev {:.2}% (< 2%, 1e5 draws at 4 distances); speed mean dev {:.3}% (< 1%), std dev {:.2}% (< 2%) over 1e6 steps, memory 0.1/0.5/0.9",
            100.0 * worst_gain,
            100.0 * worst_mean,
            100.0 * worst_std
        ),
    );
}

// ---------------------------------------------------------------- criterion 9

fn criterion_determinism(report: &mut Report, root: &Path) {
    let mut identical = Vec::new();
    for algorithm in Algorithm::ALL {
        let bytes: Vec<Vec<u8>> = ["a", "b"]
            .iter()
            .map(|name| {
                let dir = root.join("determinism").join(name);
                let mut cfg = ExperimentConfig {
                    out_dir: dir.clone(),
                    eval_window: 5,
                    checkpoint: false,
                    ..ExperimentConfig::default()
                };
                cfg.trainer.episodes = 5;
                run_single(&cfg, algorithm, 42, &dir).unwrap();
                std::fs::read(dir.join(format!("{algorithm}_seed42.csv"))).unwrap()
            })
            .collect();
        identical.push((algorithm, bytes[0] == bytes[1] && !bytes[0].is_empty()));
    }
    report.line(
        9,
        "determinism",
        identical.iter().all(|(_, same)| *same),
        format!(
            "metric files of two identical 5-episode runs: {}",
            identical
                .iter()
                .map(|(a, same)| format!("{a} {}", if *same { "identical" } else { "DIFFERENT" }))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );
}

// --------------------------------------------------------------- criterion 10

fn criterion_isolation(report: &mut Report, grid: &mut Grid) {
    let (mut runs, mut checked, mut breaches) = (0, 0, 0);
    for run in grid.runs.values() {
        if let Some(a) = run.audit {
            runs += 1;
            checked += a.checked_updates;
            breaches += a.breaches;
        }
    }
    let zero = grid.get(12, 0.0, Algorithm::Proposed, 1).records.clone();
    let dir = grid.root.join("encryption_off");
    let mut cfg = Grid::config(12, 1.0, &dir);
    cfg.trainer.encryption = false;
    let off = run_single(&cfg, Algorithm::Proposed, 1, &dir).unwrap();
    let identical = records_to_csv(&zero) == records_to_csv(&off.records);
    report.line(
        10,
        "encryption-boundary isolation",
        runs > 0 && checked > 0 && breaches == 0 && identical,
        format!(
            "{checked} audited updates over {runs} full runs, {breaches} changed the opposite local network; sigma=0 vs encryption disabled: {}",
            if identical { "bit-identical" } else { "DIFFERENT" }
        ),
    );
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let mut report = Report { failed: 0 };
    let mut grid = Grid {
        root: tmp.path().join("grid"),
        runs: BTreeMap::new(),
    };
    let start = Instant::now();
    criterion_gradients(&mut report);
    criterion_oracle(&mut report);
    criterion_toy(&mut report);
    criterion_learning(&mut report, &mut grid);
    criterion_ranking(&mut report, &mut grid);
    criterion_density(&mut report, &mut grid);
    criterion_privacy(&mut report, &mut grid);
    criterion_statistics(&mut report);
    criterion_determinism(&mut report, tmp.path());
    criterion_isolation(&mut report, &mut grid);
    println!(
        "acceptance: {} of 10 criteria passed in {:.0} s",
        10 - report.failed,
        start.elapsed().as_secs_f64()
    );
    if report.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use jeapa::agents::{FederatedAgentPair, FederatedBatch, FederatedTrainer, JointTransition, TrainerConfig};
use jeapa::baselines::{
    split_joint, train_cdrl, train_fmarl_avg, train_imarl, CentralizedTrainer, FedAvgConfig, IndependentTrainer,
};
use jeapa::env::{EnvConfig, MatrixGame, VehicularEnv};
use jeapa::metrics::EpisodeRecord;
use jeapa::nn::{Activation, DenseNet};
use jeapa::rng::{stream, Stream};

fn small_env(seed: u64) -> VehicularEnv {
    VehicularEnv::new(
        EnvConfig {
            horizon: 20,
            ..EnvConfig::default()
        },
        seed,
    )
    .unwrap()
}

fn small_trainer(episodes: usize) -> TrainerConfig {
    TrainerConfig {
        episodes,
        target_sync_period: 15,
        hidden: vec![24, 24],
        mlp_hidden: vec![24],
        ..TrainerConfig::default()
    }
}

fn bits(records: &[EpisodeRecord]) -> Vec<String> {
    records.iter().map(EpisodeRecord::to_csv_row).collect()
}

/// Additive rewards with a small interaction term; unique optimum (2, 1).
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

#[test]
fn toy_game_oracle() {
    let game = toy_game();
    let best = game.best_joint_action();
    for a in 0..3 {
        for b in 0..3 {
            assert!(game.reward(a, b) <= game.reward(best.0, best.1));
        }
    }
    assert_eq!(best, (2, 1));
}

#[test]
fn proposed_learns_toy_optimum() {
    let mut game = toy_game();
    let cfg = toy_config();
    let mut trainer = FederatedTrainer::new(&game, cfg, 3).unwrap();
    trainer.train(&mut game, |_| {}).unwrap();
    let inputs = game.inputs().to_vec();
    assert_eq!(trainer.select_actions(&inputs, 0.0).unwrap(), game.best_joint_action());
}

#[test]
fn cdrl_learns_toy_optimum() {
    let mut game = toy_game();
    let cfg = toy_config();
    let mut trainer = CentralizedTrainer::new(&game, cfg.clone(), 3).unwrap();
    for e in 1..=cfg.episodes {
        trainer.run_episode(&mut game, e).unwrap();
    }
    let inputs = game.inputs().to_vec();
    let joint = trainer.greedy_joint_action(&inputs).unwrap();
    let (a, b) = game.best_joint_action();
    assert_eq!(split_joint(joint, 3, 2), vec![a, b]);
}

#[test]
fn imarl_learns_toy_optimum() {
    let mut game = toy_game();
    let cfg = toy_config();
    let mut trainer = IndependentTrainer::new(&game, cfg.clone(), None, 3).unwrap();
    for e in 1..=cfg.episodes {
        trainer.run_episode(&mut game, e).unwrap();
    }
    let inputs = game.inputs().to_vec();
    let (a, b) = game.best_joint_action();
    assert_eq!(trainer.greedy_actions(&inputs).unwrap(), vec![a, b]);
}

#[test]
fn every_algorithm_is_deterministic() {
    let cfg = small_trainer(3);
    let run = |algo: usize, seed: u64| {
        let mut env = small_env(seed);
        match algo {
            0 => FederatedTrainer::new(&env, cfg.clone(), seed)
                .unwrap()
                .train(&mut env, |_| {})
                .unwrap(),
            1 => train_cdrl(&mut env, &cfg, seed).unwrap(),
            2 => train_imarl(&mut env, &cfg, seed).unwrap(),
            _ => train_fmarl_avg(&mut env, &cfg, &FedAvgConfig { period: 2 }, seed).unwrap(),
        }
    };
    for algo in 0..4 {
        let a = run(algo, 21);
        assert_eq!(a.len(), 3);
        assert_eq!(bits(&a), bits(&run(algo, 21)), "algorithm {algo}");
        assert_ne!(bits(&a), bits(&run(algo, 22)), "algorithm {algo}");
    }
}

#[test]
fn target_examples() {
    let mut rng = stream(1, Stream::Init, 0);
    let cfg = TrainerConfig {
        hidden: vec![4],
        mlp_hidden: vec![4],
        ..TrainerConfig::default()
    };
    let mut pair = FederatedAgentPair::new(3, 2, &cfg, &mut rng).unwrap();
    // A federated target network that outputs 2 for every joint action.
    let mut constant = DenseNet::zeros(&[4, 4, 4], Activation::Relu).unwrap();
    constant.layers_mut()[1].bias.iter_mut().for_each(|b| *b = 2.0);
    pair.mlp_target = constant;
    let t = |terminal: bool| JointTransition {
        obs: [vec![0.1, 0.2, 0.3], vec![0.3, 0.2, 0.1]],
        actions: [1, 0],
        reward: 1.0,
        next_obs: [vec![0.5, 0.5, 0.5], vec![0.4, 0.4, 0.4]],
        terminal,
    };
    let (live, done) = (t(false), t(true));
    let batch = FederatedBatch::from_transitions(&[&live, &done]);
    let y = pair.compute_target(&batch, 0.9, 1.0, &mut rng).unwrap();
    assert!((y[0] - 2.8).abs() < 1e-12);
    assert_eq!(y[1], 1.0);
    assert_eq!(pair.compute_target(&batch, 0.0, 1.0, &mut rng).unwrap(), vec![1.0, 1.0]);
}

#[test]
fn checkpoint_resume_matches_uninterrupted() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_trainer(4);
    let mut env = small_env(5);
    let mut full = FederatedTrainer::new(&env, cfg.clone(), 5).unwrap();
    let full_records = full.train(&mut env, |_| {}).unwrap();

    let mut env = small_env(5);
    let mut first = FederatedTrainer::new(&env, cfg.clone(), 5).unwrap();
    let mut records: Vec<EpisodeRecord> = (1..=2).map(|e| first.run_episode(&mut env, e).unwrap()).collect();
    first.save(dir.path()).unwrap();
    let mut resumed = FederatedTrainer::load(dir.path()).unwrap();
    assert_eq!(resumed.pair(), first.pair());
    let mut env = small_env(5);
    records.extend(resumed.train(&mut env, |_| {}).unwrap());
    assert_eq!(bits(&records), bits(&full_records));
    assert_eq!(resumed.pair(), full.pair());
    assert_eq!(resumed.train_steps(), full.train_steps());
}

#[test]
fn zero_sigma_equals_no_encryption() {
    let run = |cfg: TrainerConfig| {
        let mut env = small_env(8);
        let mut t = FederatedTrainer::new(&env, cfg, 8).unwrap();
        let r = t.train(&mut env, |_| {}).unwrap();
        (bits(&r), t.pair().clone())
    };
    let zero = TrainerConfig {
        dp_sigma: 0.0,
        ..small_trainer(3)
    };
    let off = TrainerConfig {
        encryption: false,
        ..small_trainer(3)
    };
    assert_eq!(run(zero), run(off));
}

#[test]
fn isolation_audit_finds_no_breach() {
    let mut env = small_env(9);
    let mut t = FederatedTrainer::new(&env, small_trainer(3), 9).unwrap();
    t.audit_isolation = true;
    t.train(&mut env, |_| {}).unwrap();
    let audit = t.audit();
    assert_eq!(audit.checked_updates, 2 * t.train_steps());
    assert!(audit.checked_updates > 0);
    assert_eq!(audit.breaches, 0);
}

#[test]
fn targets_change_only_at_sync_points() {
    let cfg = small_trainer(6);
    let mut env = small_env(10);
    let mut t = FederatedTrainer::new(&env, cfg.clone(), 10).unwrap();
    for e in 1..=cfg.episodes {
        let (steps, alpha, mlp) = (
            t.train_steps(),
            t.pair().alpha_target.fingerprint(),
            t.pair().mlp_target.fingerprint(),
        );
        t.run_episode(&mut env, e).unwrap();
        let crossed = t.train_steps() / cfg.target_sync_period != steps / cfg.target_sync_period;
        assert_eq!(t.pair().alpha_target.fingerprint() != alpha, crossed);
        assert_eq!(t.pair().mlp_target.fingerprint() != mlp, crossed);
        if crossed {
            let last_sync = t.train_steps() / cfg.target_sync_period * cfg.target_sync_period;
            if last_sync == t.train_steps() {
                assert_eq!(t.pair().alpha_target, t.pair().alpha);
            }
        }
    }
}

#[test]
fn metric_stream_has_one_record_per_episode() {
    let cfg = small_trainer(4);
    let mut env = small_env(2);
    let records = FederatedTrainer::new(&env, cfg, 2)
        .unwrap()
        .train(&mut env, |_| {})
        .unwrap();
    assert_eq!(records.iter().map(|r| r.episode).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    assert!(records.iter().all(EpisodeRecord::is_finite));
}

#[test]
fn baseline_architectures() {
    let env = VehicularEnv::new(EnvConfig::default(), 1).unwrap();
    let cfg = TrainerConfig::default();
    let c = CentralizedTrainer::new(&env, cfg.clone(), 1).unwrap();
    assert_eq!((c.learner.net.input_dim(), c.learner.net.output_dim()), (28, 256));
    let i = IndependentTrainer::new(&env, cfg, None, 1).unwrap();
    assert_eq!(i.learners.len(), 2);
    assert!(i
        .learners
        .iter()
        .all(|l| l.net.input_dim() == 14 && l.net.output_dim() == 16));
}

#[test]
fn infinite_period_equals_imarl() {
    let cfg = small_trainer(4);
    let mut env = small_env(4);
    let imarl = train_imarl(&mut env, &cfg, 4).unwrap();
    let mut env = small_env(4);
    let never = train_fmarl_avg(&mut env, &cfg, &FedAvgConfig::NEVER, 4).unwrap();
    assert_eq!(bits(&imarl), bits(&never));
}

#[test]
fn averaging_makes_learners_equal() {
    let cfg = small_trainer(4);
    let mut env = small_env(6);
    let mut t = IndependentTrainer::new(&env, cfg, Some(FedAvgConfig { period: 2 }), 6).unwrap();
    t.run_episode(&mut env, 1).unwrap();
    assert_ne!(t.learners[0].net, t.learners[1].net);
    t.run_episode(&mut env, 2).unwrap();
    assert_eq!(t.learners[0].net, t.learners[1].net);
    assert_eq!(t.learners[0].target, t.learners[1].target);
    t.run_episode(&mut env, 3).unwrap();
    assert_ne!(t.learners[0].net, t.learners[1].net);
}

#[test]
fn independent_learners_never_exchange_parameters() {
    let cfg = small_trainer(2);
    let mut env = small_env(7);
    let mut t = IndependentTrainer::new(&env, cfg.clone(), None, 7).unwrap();
    t.run_episode(&mut env, 1).unwrap();
    for _ in 0..20 {
        let other = t.learners[1].net.fingerprint();
        let (left, right) = t.learners.split_at_mut(1);
        left[0].learn(&cfg, 0.01).unwrap();
        assert_eq!(right[0].net.fingerprint(), other);
        let own = left[0].net.fingerprint();
        right[0].learn(&cfg, 0.01).unwrap();
        assert_eq!(left[0].net.fingerprint(), own);
    }
}

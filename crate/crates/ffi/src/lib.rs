//! C ABI over the vehicular environment and the federated trainer.
//!
//! Handles are opaque pointers created by `*_new`/`*_load` and released by
//! the matching `*_free`. Every fallible call returns a [`JeapaStatus`]; the
//! message of the last failure on the calling thread is available through
//! [`jeapa_last_error`]. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use jeapa::agents::FederatedTrainer;
use jeapa::env::{MultiAgentEnv, VehicularEnv};
use jeapa::harness::{run_experiment, ExperimentConfig};
use jeapa::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JeapaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidConfig = 3,
    Shape = 4,
    InvalidAction = 5,
    NonFinite = 6,
    Io = 7,
    Parse = 8,
    RunFailed = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

fn status_of(e: &Error) -> JeapaStatus {
    match e {
        Error::InvalidConfig(_) => JeapaStatus::InvalidConfig,
        Error::Shape(_) => JeapaStatus::Shape,
        Error::InvalidAction(_) => JeapaStatus::InvalidAction,
        Error::NonFinite(_) => JeapaStatus::NonFinite,
        Error::Io { .. } => JeapaStatus::Io,
        Error::Checkpoint(_) | Error::Metrics(_) | Error::Toml(_) | Error::Json(_) => JeapaStatus::Parse,
        Error::RunFailed(_) => JeapaStatus::RunFailed,
    }
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

struct Fail(JeapaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> JeapaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            JeapaStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            JeapaStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(JeapaStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        return Ok(None);
    }
    CStr::from_ptr(p)
        .to_str()
        .map(Some)
        .map_err(|_| Fail(JeapaStatus::InvalidArgument, "string is not UTF-8".into()))
}

unsafe fn config_arg(p: *const c_char) -> Result<ExperimentConfig, Fail> {
    Ok(match str_arg(p)? {
        Some(text) => ExperimentConfig::from_toml_str(text)?,
        None => ExperimentConfig::default(),
    })
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn flat_copy(values: &[Vec<f64>], buf: *mut f64, len: usize) -> Result<(), Fail> {
    let total: usize = values.iter().map(Vec::len).sum();
    if buf.is_null() {
        return Err(null());
    }
    if len < total {
        return Err(Fail(
            JeapaStatus::BufferTooSmall,
            format!("buffer holds {len} values, {total} needed"),
        ));
    }
    let out = std::slice::from_raw_parts_mut(buf, total);
    let mut offset = 0;
    for src in values {
        out[offset..offset + src.len()].copy_from_slice(src);
        offset += src.len();
    }
    Ok(())
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length in bytes.
#[no_mangle]
pub unsafe extern "C" fn jeapa_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Opaque vehicular environment.
pub struct JeapaEnv {
    inner: VehicularEnv,
    inputs: Vec<Vec<f64>>,
}

/// Opaque federated trainer.
pub struct JeapaTrainer {
    inner: FederatedTrainer,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct JeapaStepReport {
    pub reward: f64,
    pub pat: f64,
    pub mean_rate: f64,
    pub handovers: f64,
    pub mean_tx_power: f64,
    pub penalized: bool,
    pub terminal: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct JeapaEpisodeRecord {
    pub episode: usize,
    pub pat: f64,
    pub reward: f64,
    pub rate: f64,
    pub handovers: f64,
    pub tx_power: f64,
    pub violations: usize,
    pub epsilon: f64,
    pub lr: f64,
}

/// Create an environment from an experiment TOML document (its `[env]`
/// table is used; NULL means defaults).
#[no_mangle]
pub unsafe extern "C" fn jeapa_env_new(config_toml: *const c_char, seed: u64, out: *mut *mut JeapaEnv) -> JeapaStatus {
    guard(|| {
        let cfg = config_arg(config_toml)?;
        let inner = VehicularEnv::new(cfg.env, seed)?;
        let inputs = inner.inputs();
        write_out(out, Box::into_raw(Box::new(JeapaEnv { inner, inputs })))
    })
}

#[no_mangle]
pub unsafe extern "C" fn jeapa_env_free(env: *mut JeapaEnv) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Sizes of the environment: agents, input features per agent, actions per agent.
#[no_mangle]
pub unsafe extern "C" fn jeapa_env_dims(
    env: *const JeapaEnv,
    num_agents: *mut usize,
    obs_dim: *mut usize,
    num_actions: *mut usize,
) -> JeapaStatus {
    guard(|| {
        let env = env.as_ref().ok_or_else(null)?;
        write_out(num_agents, env.inner.num_agents())?;
        write_out(obs_dim, env.inner.obs_dim())?;
        write_out(num_actions, env.inner.num_actions())
    })
}

/// Start `episode`; writes `num_agents * obs_dim` inputs, agent-major.
#[no_mangle]
pub unsafe extern "C" fn jeapa_env_reset(
    env: *mut JeapaEnv,
    episode: u64,
    inputs: *mut f64,
    len: usize,
) -> JeapaStatus {
    guard(|| {
        let env = env.as_mut().ok_or_else(null)?;
        env.inputs = env.inner.reset_episode(episode);
        flat_copy(&env.inputs, inputs, len)
    })
}

/// Execute one action index per agent; next inputs go to `next_inputs`.
#[no_mangle]
pub unsafe extern "C" fn jeapa_env_step(
    env: *mut JeapaEnv,
    actions: *const usize,
    num_actions: usize,
    report: *mut JeapaStepReport,
    next_inputs: *mut f64,
    len: usize,
) -> JeapaStatus {
    guard(|| {
        let env = env.as_mut().ok_or_else(null)?;
        if actions.is_null() {
            return Err(null());
        }
        let acts = std::slice::from_raw_parts(actions, num_actions);
        let r = env.inner.step_joint(acts)?;
        flat_copy(&r.next_inputs, next_inputs, len)?;
        env.inputs = r.next_inputs.clone();
        write_out(
            report,
            JeapaStepReport {
                reward: r.reward,
                pat: r.pat,
                mean_rate: r.mean_rate,
                handovers: r.handovers,
                mean_tx_power: r.mean_tx_power,
                penalized: r.penalized,
                terminal: r.terminal,
            },
        )
    })
}

/// Create a federated trainer for `env` from an experiment TOML document
/// (its `[trainer]` table is used; NULL means defaults).
#[no_mangle]
pub unsafe extern "C" fn jeapa_trainer_new(
    env: *const JeapaEnv,
    config_toml: *const c_char,
    seed: u64,
    out: *mut *mut JeapaTrainer,
) -> JeapaStatus {
    guard(|| {
        let env = env.as_ref().ok_or_else(null)?;
        let cfg = config_arg(config_toml)?;
        let inner = FederatedTrainer::new(&env.inner, cfg.trainer, seed)?;
        write_out(out, Box::into_raw(Box::new(JeapaTrainer { inner })))
    })
}

#[no_mangle]
pub unsafe extern "C" fn jeapa_trainer_free(trainer: *mut JeapaTrainer) {
    if !trainer.is_null() {
        drop(Box::from_raw(trainer));
    }
}

/// One training episode (1-based) on `env`.
#[no_mangle]
pub unsafe extern "C" fn jeapa_trainer_run_episode(
    trainer: *mut JeapaTrainer,
    env: *mut JeapaEnv,
    episode: usize,
    record: *mut JeapaEpisodeRecord,
) -> JeapaStatus {
    guard(|| {
        let trainer = trainer.as_mut().ok_or_else(null)?;
        let env = env.as_mut().ok_or_else(null)?;
        if episode == 0 {
            return Err(Fail(
                JeapaStatus::InvalidArgument,
                "episodes are numbered from 1".into(),
            ));
        }
        let r = trainer.inner.run_episode(&mut env.inner, episode)?;
        env.inputs = env.inner.inputs();
        write_out(
            record,
            JeapaEpisodeRecord {
                episode: r.episode,
                pat: r.pat,
                reward: r.reward,
                rate: r.rate,
                handovers: r.handovers,
                tx_power: r.tx_power,
                violations: r.violations,
                epsilon: r.epsilon,
                lr: r.lr,
            },
        )
    })
}

/// Joint action for the environment's current inputs at exploration rate
/// `epsilon` (0 for greedy execution).
#[no_mangle]
pub unsafe extern "C" fn jeapa_trainer_select(
    trainer: *mut JeapaTrainer,
    env: *const JeapaEnv,
    epsilon: f64,
    alpha_action: *mut usize,
    beta_action: *mut usize,
) -> JeapaStatus {
    guard(|| {
        let trainer = trainer.as_mut().ok_or_else(null)?;
        let env = env.as_ref().ok_or_else(null)?;
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Fail(
                JeapaStatus::InvalidArgument,
                format!("epsilon {epsilon} outside [0, 1]"),
            ));
        }
        let (a, b) = trainer.inner.select_actions(&env.inputs, epsilon)?;
        write_out(alpha_action, a)?;
        write_out(beta_action, b)
    })
}

#[no_mangle]
pub unsafe extern "C" fn jeapa_trainer_save(trainer: *const JeapaTrainer, dir: *const c_char) -> JeapaStatus {
    guard(|| {
        let trainer = trainer.as_ref().ok_or_else(null)?;
        let dir = str_arg(dir)?.ok_or_else(null)?;
        trainer.inner.save(&PathBuf::from(dir))?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn jeapa_trainer_load(dir: *const c_char, out: *mut *mut JeapaTrainer) -> JeapaStatus {
    guard(|| {
        let dir = str_arg(dir)?.ok_or_else(null)?;
        let inner = FederatedTrainer::load(&PathBuf::from(dir))?;
        write_out(out, Box::into_raw(Box::new(JeapaTrainer { inner })))
    })
}

/// Run a full experiment described by a TOML document; outputs go to its `out_dir`.
#[no_mangle]
pub unsafe extern "C" fn jeapa_run_experiment(config_toml: *const c_char) -> JeapaStatus {
    guard(|| {
        let cfg = config_arg(config_toml)?;
        run_experiment(&cfg)?;
        Ok(())
    })
}

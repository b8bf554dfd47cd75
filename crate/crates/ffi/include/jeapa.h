#ifndef JEAPA_H
#define JEAPA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum JeapaStatus {
  JEAPA_STATUS_OK = 0,
  JEAPA_STATUS_NULL_POINTER = 1,
  JEAPA_STATUS_INVALID_ARGUMENT = 2,
  JEAPA_STATUS_INVALID_CONFIG = 3,
  JEAPA_STATUS_SHAPE = 4,
  JEAPA_STATUS_INVALID_ACTION = 5,
  JEAPA_STATUS_NON_FINITE = 6,
  JEAPA_STATUS_IO = 7,
  JEAPA_STATUS_PARSE = 8,
  JEAPA_STATUS_RUN_FAILED = 9,
  JEAPA_STATUS_BUFFER_TOO_SMALL = 10,
  JEAPA_STATUS_PANIC = 11,
} JeapaStatus;

/**
 * Opaque vehicular environment.
 */
typedef struct JeapaEnv JeapaEnv;

/**
 * Opaque federated trainer.
 */
typedef struct JeapaTrainer JeapaTrainer;

typedef struct JeapaStepReport {
  double reward;
  double pat;
  double mean_rate;
  double handovers;
  double mean_tx_power;
  bool penalized;
  bool terminal;
} JeapaStepReport;

typedef struct JeapaEpisodeRecord {
  size_t episode;
  double pat;
  double reward;
  double rate;
  double handovers;
  double tx_power;
  size_t violations;
  double epsilon;
  double lr;
} JeapaEpisodeRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length in bytes.
 */
size_t jeapa_last_error(char *buf, size_t len);

/**
 * Create an environment from an experiment TOML document (its `[env]`
 * table is used; NULL means defaults).
 */
enum JeapaStatus jeapa_env_new(const char *config_toml, uint64_t seed, struct JeapaEnv **out);

void jeapa_env_free(struct JeapaEnv *env);

/**
 * Sizes of the environment: agents, input features per agent, actions per agent.
 */
enum JeapaStatus jeapa_env_dims(const struct JeapaEnv *env,
                                size_t *num_agents,
                                size_t *obs_dim,
                                size_t *num_actions);

/**
 * Start `episode`; writes `num_agents * obs_dim` inputs, agent-major.
 */
enum JeapaStatus jeapa_env_reset(struct JeapaEnv *env,
                                 uint64_t episode,
                                 double *inputs,
                                 size_t len);

/**
 * Execute one action index per agent; next inputs go to `next_inputs`.
 */
enum JeapaStatus jeapa_env_step(struct JeapaEnv *env,
                                const size_t *actions,
                                size_t num_actions,
                                struct JeapaStepReport *report,
                                double *next_inputs,
                                size_t len);

/**
 * Create a federated trainer for `env` from an experiment TOML document
 * (its `[trainer]` table is used; NULL means defaults).
 */
enum JeapaStatus jeapa_trainer_new(const struct JeapaEnv *env,
                                   const char *config_toml,
                                   uint64_t seed,
                                   struct JeapaTrainer **out);

void jeapa_trainer_free(struct JeapaTrainer *trainer);

/**
 * One training episode (1-based) on `env`.
 */
enum JeapaStatus jeapa_trainer_run_episode(struct JeapaTrainer *trainer,
                                           struct JeapaEnv *env,
                                           size_t episode,
                                           struct JeapaEpisodeRecord *record);

/**
 * Joint action for the environment's current inputs at exploration rate
 * `epsilon` (0 for greedy execution).
 */
enum JeapaStatus jeapa_trainer_select(struct JeapaTrainer *trainer,
                                      const struct JeapaEnv *env,
                                      double epsilon,
                                      size_t *alpha_action,
                                      size_t *beta_action);

enum JeapaStatus jeapa_trainer_save(const struct JeapaTrainer *trainer, const char *dir);

enum JeapaStatus jeapa_trainer_load(const char *dir, struct JeapaTrainer **out);

/**
 * Run a full experiment described by a TOML document; outputs go to its `out_dir`.
 */
enum JeapaStatus jeapa_run_experiment(const char *config_toml);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JEAPA_H */

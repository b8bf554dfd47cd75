#include <stdio.h>
#include "jeapa.h"

int main(void) {
    const char *cfg = "eval_window = 1\n[env]\nhorizon = 4\n[trainer]\nepisodes = 2\nhidden = [8]\nmlp_hidden = [8]\nbatch_size = 2\n";
    JeapaEnv *env = NULL;
    JeapaTrainer *trainer = NULL;
    if (jeapa_env_new(cfg, 7, &env) != JEAPA_STATUS_OK) return 1;
    if (jeapa_trainer_new(env, cfg, 7, &trainer) != JEAPA_STATUS_OK) return 2;
    for (size_t e = 1; e <= 2; e++) {
        JeapaEpisodeRecord rec;
        if (jeapa_trainer_run_episode(trainer, env, e, &rec) != JEAPA_STATUS_OK) return 3;
        printf("episode %zu pat %.6f\n", rec.episode, rec.pat);
    }
    size_t bad[2] = {99, 0};
    double next[28];
    JeapaStepReport report;
    if (jeapa_env_step(env, bad, 2, &report, next, 28) != JEAPA_STATUS_INVALID_ACTION) return 4;
    char msg[128];
    jeapa_last_error(msg, sizeof msg);
    printf("error: %s\n", msg);
    jeapa_trainer_free(trainer);
    jeapa_env_free(env);
    return 0;
}

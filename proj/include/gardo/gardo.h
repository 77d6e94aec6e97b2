/* GARDO lab: C API for the shared library.
 *
 * All entry points return a gardo_status; on failure the thread-local
 * message from gardo_last_error() describes what went wrong. Handles are
 * opaque and must be released with their _free function.
 */
#ifndef GARDO_GARDO_H
#define GARDO_GARDO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GARDO_API __declspec(dllexport)
#else
#define GARDO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gardo_status {
    GARDO_OK = 0,
    GARDO_ERR_USAGE = 1,   /* bad input: config, preset, paths, ranges */
    GARDO_ERR_RUNTIME = 2  /* execution failure: divergence, IO */
} gardo_status;

typedef struct gardo_config gardo_config; /* opaque */

GARDO_API const char* gardo_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
GARDO_API const char* gardo_last_error(void);

/* ---- configuration ---------------------------------------------------- */

/* New config with all defaults. */
GARDO_API gardo_status gardo_config_create(gardo_config** out);

/* Parse a flat key = value file ('#' comments). */
GARDO_API gardo_status gardo_config_load(const char* path, gardo_config** out);

/* Set one key; same grammar as the file format. */
GARDO_API gardo_status gardo_config_set(gardo_config* cfg, const char* key, const char* value);

/* Validate ranges and cross-field constraints. */
GARDO_API gardo_status gardo_config_validate(const gardo_config* cfg);

/* Full resolved key = value snapshot into buf (NUL-terminated, truncated
 * to cap). Returns the required size through needed if non-NULL. */
GARDO_API gardo_status gardo_config_serialize(const gardo_config* cfg, char* buf, size_t cap,
                                              size_t* needed);

GARDO_API void gardo_config_free(gardo_config* cfg);

/* ---- runs -------------------------------------------------------------- */

/* Pretrains the diffusion model for cfg's preset. Writes the run directory
 * path into run_dir_out (NUL-terminated, truncated to cap). */
GARDO_API gardo_status gardo_pretrain(const gardo_config* cfg, char* run_dir_out, size_t cap);

/* Runs the fine-tuning loop for cfg's method. Requires the preset's
 * pretrain checkpoint (or cfg key pretrain_ckpt). */
GARDO_API gardo_status gardo_finetune(const gardo_config* cfg, char* run_dir_out, size_t cap);

typedef struct gardo_eval_report {
    double mean_proxy;
    double se_proxy;
    double mean_true;
    double se_true;
    double diversity;
    int covered_modes;
    int hacked; /* 0/1; -1 when no reference checkpoint was available */
    double gap;
    long samples;
} gardo_eval_report;

/* Evaluates a checkpoint under cfg's preset. reference_ckpt may be NULL to
 * use the preset's default pretrain checkpoint; csv_path may be NULL to
 * skip writing the one-row report file. */
GARDO_API gardo_status gardo_eval(const gardo_config* cfg, const char* checkpoint,
                                  const char* reference_ckpt, const char* csv_path,
                                  gardo_eval_report* out);

/* Verifies the closed-form optimum ratio identity on a density grid;
 * writes the max relative error over `pairs` random cell pairs. */
GARDO_API gardo_status gardo_oracle(const gardo_config* cfg, double beta, int pairs,
                                    int grid_n, double* max_rel_err_out);

/* Renders reward_curve.svg, kl_dynamics.svg and samples_panel.svg from a
 * finished run directory. out_dir may be NULL to render into run_dir. */
GARDO_API gardo_status gardo_plot(const char* run_dir, const char* out_dir);

/* Newline-separated "name: description" list of registered presets. */
GARDO_API gardo_status gardo_presets(char* buf, size_t cap, size_t* needed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GARDO_GARDO_H */

#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "gardo_ops.hpp"
#include "metrics.hpp"
#include "run_io.hpp"

namespace gardo {

struct PretrainRunResult {
    std::string run_dir;
    std::string checkpoint_path;
    double final_loss = 0.0;
};

// Pretrains the denoiser for the config's preset and writes the checkpoint
// into the run directory (default <run_root>/pretrain-<mixture-id>).
PretrainRunResult pretrain_run(const TrainConfig& cfg);

// Default checkpoint location finetune/eval fall back to.
std::string default_pretrain_checkpoint(const std::string& preset_name);

struct FinetuneRunResult {
    std::string run_dir;
    std::vector<MetricsRecord> metrics;
    // Per-sample rollout data across all iterations, kept in memory for
    // analysis (uncertainty discrimination, hacking mass); not persisted.
    std::vector<double> rollout_uncertainty;
    std::vector<Vec2> rollout_x0;
    MlpParams final_params;
};

// The full fine-tuning loop: per iteration snapshot the behavior policy,
// roll out a group with shared initial noise, score, normalize and shape
// advantages, estimate uncertainty, gate, take one optimizer step, adapt k
// and maybe reset the reference; logs one MetricsRecord per iteration and
// persists checkpoints on the configured cadence.
FinetuneRunResult finetune_run(const TrainConfig& cfg);

// Evaluates a checkpoint under a preset's rewards; reference_ckpt may be
// empty to use the preset's default pretrain checkpoint for the hacking
// comparison (skipped if that file does not exist).
EvalReport eval_run(const TrainConfig& cfg, const std::string& checkpoint_path,
                    const std::string& reference_ckpt, const std::string& out_csv);

// Grid verification of the closed-form optimum ratio identity.
double oracle_run(const TrainConfig& cfg, double beta, int pairs, std::size_t grid_n);

// Re-renders the figures of a finished run from its persisted files.
std::vector<std::string> plot_run(const std::string& run_dir, const std::string& out_dir);

// Reward fields for a config: preset rewards with any inline overrides.
HackingWorld resolve_rewards(const TrainConfig& cfg);

std::string eval_report_csv_header();
std::string eval_report_csv_row(const EvalReport& report);

}  // namespace gardo

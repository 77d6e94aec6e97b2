#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "diffusion.hpp"
#include "feature_map.hpp"
#include "mlp.hpp"

namespace gardo {

// One group of rollouts with everything the loss needs. shaped_advantages
// is always populated (equal to advantages when shaping is off).
struct GroupRollout {
    std::vector<Trajectory> trajectories;
    std::vector<double> proxy_rewards;
    std::vector<double> advantages;
    std::vector<double> shaped_advantages;
    std::vector<double> diversity;
    std::vector<double> uncertainty;
    std::vector<uint8_t> gate_mask;

    std::size_t size() const { return trajectories.size(); }
};

// Mutable trainer state: gate fraction, uncertainty window, reset counter
// and the reference snapshot, plus the regularization constants.
struct GardoState {
    double k = 0.1;
    std::deque<double> window;
    std::size_t window_capacity = 20;  // W
    long steps_since_reset = 0;
    long max_steps_between_resets = 100;  // m
    MlpParams reference;
    double beta = 0.04;
    double eps_clip = 1e-4;
    double eps_kl = 1e-4;
};

// Group-relative advantages: mean-centered, optionally divided by the
// population std floored at 1e-8.
std::vector<double> compute_advantages(const std::vector<double>& rewards, bool use_std);

// Nearest-neighbor cosine distance per embedding, each in [0, 2]. A
// zero-norm embedding gets distance 0 with a logged warning.
std::vector<double> diversity_scores_from_embeddings(const std::vector<std::vector<double>>& embeddings);
std::vector<double> diversity_scores(const std::vector<Vec2>& samples, const FeatureMap& fmap);

// Multiplies positive advantages by the diversity score; zero and negative
// advantages pass through unchanged.
std::vector<double> shape_advantages(const std::vector<double>& advantages,
                                     const std::vector<double>& diversity);

// Win-rate disagreement: U_i = w(proxy)_i - mean_n w(aux_n)_i with
// w(y)_i = (1/B) * #{j != i : y_i > y_j}; ties count for neither side.
std::vector<double> estimate_uncertainty(const std::vector<double>& proxy,
                                         const std::vector<std::vector<double>>& auxiliaries);

// mask_i = U_i strictly above the nearest-rank (1-k) quantile of U.
std::vector<uint8_t> gate_mask(const std::vector<double>& uncertainty, double k);

// Window-driven multiplicative update of the gate fraction, then append.
void adapt_k(GardoState& state, double batch_mean_uncertainty);

// Resets the reference snapshot when the gated KL exceeded eps_kl or m
// gradient steps elapsed since the last reset. Returns whether it fired.
bool maybe_reset_reference(GardoState& state, const MlpParams& current, double last_kl_loss);

struct LossResult {
    double objective = 0.0;  // to be ascended
    MlpGrad grad;            // d objective / d policy params
    double kl_loss = 0.0;    // mean gated per-step KL over the batch (unscaled by beta)
    int excluded_samples = 0;
};

// Clipped GRPO surrogate with the KL penalty applied only where the gate
// mask is set. Uses the stored rollout log-probs as the behavior policy
// side of the importance ratio. apply_kl toggles the whole KL path (off
// for beta = 0 so the reference is never read).
LossResult grpo_loss(const GroupRollout& group, const MlpParams& policy,
                     const MlpParams& old_policy, const NoiseSchedule& sched,
                     const GardoState& state, bool apply_kl);

// Single-step clipped surrogate term, exposed for direct testing.
double clipped_term(double ratio, double advantage, double eps_clip);

}  // namespace gardo

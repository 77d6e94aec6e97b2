#pragma once

#include <vector>

#include "mixture.hpp"
#include "mlp.hpp"
#include "schedule.hpp"

namespace gardo {

// One reverse-denoising episode. states[t] is x_t for t = 0..T, so
// states[T] is the initial noise draw and states[0] the scored sample.
// means[t-1] and log_probs[t-1] belong to the transition x_t -> x_{t-1}.
struct Trajectory {
    std::vector<Vec2> states;
    std::vector<Vec2> means;
    std::vector<double> log_probs;
    int condition_id = 0;

    const Vec2& x0() const { return states.front(); }
    const Vec2& xT() const { return states.back(); }
};

// Posterior mean for transition t given the network's noise prediction.
Vec2 posterior_mean(const NoiseSchedule& sched, const Vec2& x_t, std::size_t t,
                    const Vec2& eps_hat);

// Network mean mu_theta(x_t, t); cache is filled for backprop.
Vec2 policy_mean(const MlpParams& policy, const NoiseSchedule& sched, const Vec2& x_t,
                 std::size_t t, MlpCache& cache);
Vec2 policy_mean(const MlpParams& policy, const NoiseSchedule& sched, const Vec2& x_t,
                 std::size_t t);

// log N(x_prev; mu_theta(x_t,t), sigma_t^2 I). t must lie in [1, T].
double step_log_prob(const MlpParams& policy, const NoiseSchedule& sched, const Vec2& x_t,
                     std::size_t t, const Vec2& x_prev);

// Closed-form KL between the equal-variance step Gaussians of two policies
// at the same state: ||mu_theta - mu_ref||^2 / (2 sigma_t^2).
double step_kl(const MlpParams& policy, const MlpParams& reference, const NoiseSchedule& sched,
               const Vec2& x_t, std::size_t t);

// Density value used by log-prob identities in tests.
double gaussian_step_log_density(const Vec2& x, const Vec2& mean, double sigma);

// Samples one full trajectory starting from the given x_T.
Trajectory sample_trajectory(const MlpParams& policy, const NoiseSchedule& sched, const Vec2& x_T,
                             Rng& rng);

// G trajectories under one condition. With shared_noise all trajectories
// start from the same x_T draw while per-step transition noise differs.
std::vector<Trajectory> rollout_group(const MlpParams& policy, const NoiseSchedule& sched,
                                      std::size_t G, bool shared_noise, Rng rng);

struct PretrainConfig {
    long steps = 20000;
    std::size_t batch = 64;
    double lr = 1e-3;
    std::size_t hidden = 64;
    std::size_t t_embed_dim = 16;
};

struct PretrainResult {
    MlpParams params;
    double final_loss = 0.0;  // mean noise-prediction loss over the last 200 steps
};

// Standard noise-prediction pretraining of the denoiser on mixture samples.
// Throws RuntimeError with seed and step diagnostics if the loss diverges.
PretrainResult pretrain(const GaussianMixture& mixture, const NoiseSchedule& sched,
                        const PretrainConfig& cfg, Rng rng);

}  // namespace gardo

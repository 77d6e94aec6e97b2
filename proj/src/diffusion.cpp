#include "diffusion.hpp"

#include <cmath>
#include <cstdio>

#include "errors.hpp"

namespace gardo {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_t(const NoiseSchedule& sched, std::size_t t) {
    if (t < 1 || t > sched.T) throw UsageError("diffusion: step index out of [1, T]");
}
}  // namespace

Vec2 posterior_mean(const NoiseSchedule& sched, const Vec2& x_t, std::size_t t,
                    const Vec2& eps_hat) {
    const double coef = sched.noise_coef(t);
    const double inv_sqrt_alpha = 1.0 / std::sqrt(sched.alpha(t));
    return {(x_t.x - coef * eps_hat.x) * inv_sqrt_alpha, (x_t.y - coef * eps_hat.y) * inv_sqrt_alpha};
}

Vec2 policy_mean(const MlpParams& policy, const NoiseSchedule& sched, const Vec2& x_t,
                 std::size_t t, MlpCache& cache) {
    check_t(sched, t);
    const Vec2 eps_hat = mlp_forward(policy, x_t, time_embedding(static_cast<int>(t), policy.t_embed_dim), cache);
    return posterior_mean(sched, x_t, t, eps_hat);
}

Vec2 policy_mean(const MlpParams& policy, const NoiseSchedule& sched, const Vec2& x_t,
                 std::size_t t) {
    MlpCache cache;
    return policy_mean(policy, sched, x_t, t, cache);
}

double gaussian_step_log_density(const Vec2& x, const Vec2& mean, double sigma) {
    const double d2 = (x - mean).norm2();
    return -d2 / (2.0 * sigma * sigma) - std::log(kTwoPi * sigma * sigma);
}

double step_log_prob(const MlpParams& policy, const NoiseSchedule& sched, const Vec2& x_t,
                     std::size_t t, const Vec2& x_prev) {
    check_t(sched, t);
    const Vec2 mu = policy_mean(policy, sched, x_t, t);
    return gaussian_step_log_density(x_prev, mu, sched.sigma(t));
}

double step_kl(const MlpParams& policy, const MlpParams& reference, const NoiseSchedule& sched,
               const Vec2& x_t, std::size_t t) {
    check_t(sched, t);
    if (!policy.same_shape(reference)) throw UsageError("step_kl: parameter shape mismatch");
    const Vec2 mu_p = policy_mean(policy, sched, x_t, t);
    const Vec2 mu_r = policy_mean(reference, sched, x_t, t);
    const double s = sched.sigma(t);
    return (mu_p - mu_r).norm2() / (2.0 * s * s);
}

Trajectory sample_trajectory(const MlpParams& policy, const NoiseSchedule& sched, const Vec2& x_T,
                             Rng& rng) {
    Trajectory traj;
    const std::size_t T = sched.T;
    traj.states.resize(T + 1);
    traj.means.resize(T);
    traj.log_probs.resize(T);
    traj.states[T] = x_T;
    for (std::size_t t = T; t >= 1; --t) {
        const Vec2 mu = policy_mean(policy, sched, traj.states[t], t);
        const double sigma = sched.sigma(t);
        const auto [z1, z2] = rng.normal2();
        const Vec2 x_prev{mu.x + sigma * z1, mu.y + sigma * z2};
        traj.states[t - 1] = x_prev;
        traj.means[t - 1] = mu;
        traj.log_probs[t - 1] = gaussian_step_log_density(x_prev, mu, sigma);
    }
    return traj;
}

std::vector<Trajectory> rollout_group(const MlpParams& policy, const NoiseSchedule& sched,
                                      std::size_t G, bool shared_noise, Rng rng) {
    if (G < 2) throw UsageError("rollout_group: G must be at least 2");
    std::vector<Trajectory> group;
    group.reserve(G);
    Rng init_rng = rng.derive(0);
    const auto [sx, sy] = init_rng.normal2();
    const Vec2 shared_xT{sx, sy};
    for (std::size_t i = 0; i < G; ++i) {
        Rng traj_rng = rng.derive(i + 1);
        Vec2 x_T = shared_xT;
        if (!shared_noise) {
            const auto [zx, zy] = traj_rng.normal2();
            x_T = {zx, zy};
        }
        group.push_back(sample_trajectory(policy, sched, x_T, traj_rng));
    }
    return group;
}

PretrainResult pretrain(const GaussianMixture& mixture, const NoiseSchedule& sched,
                        const PretrainConfig& cfg, Rng rng) {
    validate_mixture(mixture);
    if (cfg.steps < 0) throw UsageError("pretrain: steps must be nonnegative");

    Rng init_rng = rng.derive(stream::init);
    MlpParams params = make_mlp(cfg.hidden, cfg.t_embed_dim, init_rng);
    AdamState adam = make_adam(params, cfg.lr);

    double loss_accum = 0.0;
    long loss_count = 0;
    const long tail = std::min<long>(200, std::max<long>(1, cfg.steps));

    for (long step = 0; step < cfg.steps; ++step) {
        Rng batch_rng = rng.derive(stream::pretrain).derive(static_cast<uint64_t>(step));
        MlpGrad grad = zeros_like(params);
        double loss = 0.0;
        MlpCache cache;
        for (std::size_t b = 0; b < cfg.batch; ++b) {
            const Vec2 x0 = mixture.sample(batch_rng);
            const std::size_t t =
                1 + static_cast<std::size_t>(batch_rng.next_u64() % sched.T);
            const auto [e1, e2] = batch_rng.normal2();
            const double ab = sched.alpha_bar(t);
            const double sa = std::sqrt(ab), sb = std::sqrt(1.0 - ab);
            const Vec2 x_t{sa * x0.x + sb * e1, sa * x0.y + sb * e2};
            const Vec2 eps_hat =
                mlp_forward(params, x_t, time_embedding(static_cast<int>(t), params.t_embed_dim), cache);
            const Vec2 diff{eps_hat.x - e1, eps_hat.y - e2};
            loss += diff.norm2();
            // d ||eps_hat - eps||^2 / d eps_hat = 2 (eps_hat - eps); average over the batch
            mlp_backward_accum(params, cache, diff * (2.0 / static_cast<double>(cfg.batch)), grad);
        }
        loss /= static_cast<double>(cfg.batch);
        if (!std::isfinite(loss)) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "pretrain: loss diverged at step %ld (rng key %llx)",
                          step, static_cast<unsigned long long>(rng.key()));
            throw RuntimeError(buf);
        }
        adam_step(params, grad, adam);
        if (step >= cfg.steps - tail) {
            loss_accum += loss;
            loss_count += 1;
        }
    }

    PretrainResult res;
    res.params = std::move(params);
    res.final_loss = loss_count > 0 ? loss_accum / static_cast<double>(loss_count) : 0.0;
    return res;
}

}  // namespace gardo

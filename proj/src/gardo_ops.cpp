#include "gardo_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "errors.hpp"
#include "log.hpp"

namespace gardo {

std::vector<double> compute_advantages(const std::vector<double>& rewards, bool use_std) {
    const std::size_t g = rewards.size();
    if (g < 2) throw UsageError("compute_advantages: need a group of at least 2");
    double mean = 0.0;
    for (double r : rewards) mean += r;
    mean /= static_cast<double>(g);

    std::vector<double> adv(g);
    for (std::size_t i = 0; i < g; ++i) adv[i] = rewards[i] - mean;
    if (use_std) {
        double var = 0.0;
        for (double a : adv) var += a * a;
        var /= static_cast<double>(g);  // population std
        const double denom = std::max(std::sqrt(var), 1e-8);
        for (double& a : adv) a /= denom;
    }
    return adv;
}

std::vector<double> diversity_scores_from_embeddings(
    const std::vector<std::vector<double>>& embeddings) {
    const std::size_t g = embeddings.size();
    if (g < 2) throw UsageError("diversity_scores: need at least 2 samples");

    std::vector<double> norms(g);
    for (std::size_t i = 0; i < g; ++i) {
        double n2 = 0.0;
        for (double v : embeddings[i]) n2 += v * v;
        norms[i] = std::sqrt(n2);
    }

    std::vector<double> scores(g, 0.0);
    for (std::size_t i = 0; i < g; ++i) {
        if (norms[i] == 0.0) {
            log_warning("diversity_scores: zero-norm embedding, score set to 0");
            continue;
        }
        double best = 2.0;
        for (std::size_t j = 0; j < g; ++j) {
            if (j == i || norms[j] == 0.0) continue;
            double dot = 0.0;
            for (std::size_t d = 0; d < embeddings[i].size(); ++d)
                dot += embeddings[i][d] * embeddings[j][d];
            best = std::min(best, 1.0 - dot / (norms[i] * norms[j]));
        }
        scores[i] = best;
    }
    return scores;
}

std::vector<double> diversity_scores(const std::vector<Vec2>& samples, const FeatureMap& fmap) {
    std::vector<std::vector<double>> embeddings;
    embeddings.reserve(samples.size());
    for (const auto& s : samples) embeddings.push_back(fmap.embed(s));
    return diversity_scores_from_embeddings(embeddings);
}

std::vector<double> shape_advantages(const std::vector<double>& advantages,
                                     const std::vector<double>& diversity) {
    if (advantages.size() != diversity.size())
        throw UsageError("shape_advantages: length mismatch");
    std::vector<double> shaped(advantages.size());
    for (std::size_t i = 0; i < advantages.size(); ++i)
        shaped[i] = advantages[i] > 0.0 ? advantages[i] * diversity[i] : advantages[i];
    return shaped;
}

std::vector<double> estimate_uncertainty(const std::vector<double>& proxy,
                                         const std::vector<std::vector<double>>& auxiliaries) {
    const std::size_t b = proxy.size();
    if (b < 2) throw UsageError("estimate_uncertainty: need a batch of at least 2");
    if (auxiliaries.empty()) throw UsageError("estimate_uncertainty: need at least one auxiliary");
    for (const auto& aux : auxiliaries)
        if (aux.size() != b) throw UsageError("estimate_uncertainty: length mismatch");

    auto win_rates = [b](const std::vector<double>& values) {
        std::vector<double> w(b, 0.0);
        for (std::size_t i = 0; i < b; ++i) {
            int wins = 0;
            for (std::size_t j = 0; j < b; ++j)
                if (j != i && values[i] > values[j]) ++wins;
            w[i] = static_cast<double>(wins) / static_cast<double>(b);
        }
        return w;
    };

    const std::vector<double> wp = win_rates(proxy);
    std::vector<double> wa_mean(b, 0.0);
    for (const auto& aux : auxiliaries) {
        const std::vector<double> wa = win_rates(aux);
        for (std::size_t i = 0; i < b; ++i) wa_mean[i] += wa[i];
    }
    std::vector<double> u(b);
    for (std::size_t i = 0; i < b; ++i)
        u[i] = wp[i] - wa_mean[i] / static_cast<double>(auxiliaries.size());
    return u;
}

std::vector<uint8_t> gate_mask(const std::vector<double>& uncertainty, double k) {
    if (!(k > 0.0 && k <= 1.0)) throw UsageError("gate_mask: k must lie in (0, 1]");
    const std::size_t b = uncertainty.size();
    std::vector<double> sorted = uncertainty;
    std::sort(sorted.begin(), sorted.end());
    // Nearest-rank quantile at (1-k); the small slack absorbs float error
    // in (1-k)*b for exact-fraction ranks.
    const double raw = (1.0 - k) * static_cast<double>(b);
    long rank = static_cast<long>(std::ceil(raw - 1e-9));
    rank = std::max<long>(1, std::min<long>(rank, static_cast<long>(b)));
    const double threshold = sorted[static_cast<std::size_t>(rank - 1)];

    std::vector<uint8_t> mask(b, 0);
    for (std::size_t i = 0; i < b; ++i) mask[i] = uncertainty[i] > threshold ? 1 : 0;
    return mask;
}

void adapt_k(GardoState& state, double batch_mean_uncertainty) {
    if (state.window.size() >= state.window_capacity) {
        const auto [mn, mx] = std::minmax_element(state.window.begin(), state.window.end());
        if (batch_mean_uncertainty > *mx)
            state.k = std::min(state.k * 1.1, 1.0);
        else if (batch_mean_uncertainty < *mn)
            state.k *= 0.9;
    }
    state.window.push_back(batch_mean_uncertainty);
    while (state.window.size() > state.window_capacity) state.window.pop_front();
}

bool maybe_reset_reference(GardoState& state, const MlpParams& current, double last_kl_loss) {
    state.steps_since_reset += 1;
    if (last_kl_loss > state.eps_kl || state.steps_since_reset >= state.max_steps_between_resets) {
        state.reference = current;
        state.steps_since_reset = 0;
        return true;
    }
    return false;
}

double clipped_term(double ratio, double advantage, double eps_clip) {
    const double clipped = std::clamp(ratio, 1.0 - eps_clip, 1.0 + eps_clip);
    return std::min(ratio * advantage, clipped * advantage);
}

LossResult grpo_loss(const GroupRollout& group, const MlpParams& policy,
                     const MlpParams& old_policy, const NoiseSchedule& sched,
                     const GardoState& state, bool apply_kl) {
    const std::size_t g = group.size();
    if (g == 0) throw UsageError("grpo_loss: empty group");
    if (group.shaped_advantages.size() != g || group.gate_mask.size() != g)
        throw UsageError("grpo_loss: group arrays not populated");
    if (!policy.same_shape(old_policy)) throw UsageError("grpo_loss: shape mismatch");
    bool any_gated = false;
    for (std::size_t i = 0; apply_kl && i < g; ++i) any_gated = any_gated || group.gate_mask[i];
    if (any_gated && !policy.same_shape(state.reference))
        throw UsageError("grpo_loss: reference params not initialized");

    LossResult res;
    res.grad = zeros_like(policy);
    const std::size_t T = sched.T;
    const double norm = 1.0 / (static_cast<double>(g) * static_cast<double>(T));

    double surrogate_sum = 0.0;
    double kl_sum = 0.0;
    MlpCache cache, ref_cache;

    for (std::size_t i = 0; i < g; ++i) {
        const Trajectory& traj = group.trajectories[i];
        const double adv = group.shaped_advantages[i];
        const bool gated = apply_kl && group.gate_mask[i] != 0;

        // Pass 1: ratios only, so a non-finite one excludes the whole sample
        // before anything is accumulated.
        std::vector<double> ratios(T);
        bool finite = true;
        for (std::size_t t = T; t >= 1; --t) {
            const double lp_new =
                step_log_prob(policy, sched, traj.states[t], t, traj.states[t - 1]);
            const double r = std::exp(lp_new - traj.log_probs[t - 1]);
            if (!std::isfinite(r)) {
                finite = false;
                break;
            }
            ratios[t - 1] = r;
        }
        if (!finite) {
            res.excluded_samples += 1;
            char buf[64];
            std::snprintf(buf, sizeof(buf), "grpo_loss: non-finite ratio, sample %zu excluded", i);
            log_warning(buf);
            continue;
        }

        for (std::size_t t = T; t >= 1; --t) {
            const Vec2& x_t = traj.states[t];
            const Vec2& x_prev = traj.states[t - 1];
            const double sigma = sched.sigma(t);
            const double inv_var = 1.0 / (sigma * sigma);
            const Vec2 mu = policy_mean(policy, sched, x_t, t, cache);
            const double r = ratios[t - 1];

            const double unclipped = r * adv;
            const double clipped =
                std::clamp(r, 1.0 - state.eps_clip, 1.0 + state.eps_clip) * adv;
            surrogate_sum += std::min(unclipped, clipped);

            Vec2 grad_mu{0.0, 0.0};
            if (unclipped <= clipped) {
                // d(r*A)/d mu = A * r * d log pi / d mu
                const double w = adv * r * inv_var;
                grad_mu += (x_prev - mu) * w;
            }
            if (gated) {
                const Vec2 mu_ref = policy_mean(state.reference, sched, x_t, t, ref_cache);
                const Vec2 delta = mu - mu_ref;
                kl_sum += delta.norm2() * 0.5 * inv_var;
                // objective subtracts beta * KL
                grad_mu += delta * (-state.beta * inv_var);
            }
            if (grad_mu.x != 0.0 || grad_mu.y != 0.0) {
                const double dmu = sched.dmu_deps(t);
                mlp_backward_accum(policy, cache, grad_mu * (dmu * norm), res.grad);
            }
        }
    }

    res.objective = (surrogate_sum - state.beta * kl_sum) * norm;
    res.kl_loss = kl_sum * norm;
    return res;
}

}  // namespace gardo

#pragma once

#include <cstddef>
#include <vector>

namespace gardo {

// DDPM noise schedule over T reverse steps. Transition t (t = 1..T) moves
// x_t to x_{t-1} with policy mean mu_theta(x_t, t) and fixed std sigma_t.
// Arrays are 0-indexed: betas[t-1] belongs to transition t.
struct NoiseSchedule {
    std::size_t T = 0;
    std::vector<double> betas;
    std::vector<double> alpha_bars;  // cumulative products of (1 - beta)
    std::vector<double> sigmas;      // per-step policy std, sigma_t = sqrt(beta_t)

    double beta(std::size_t t) const { return betas[t - 1]; }
    double alpha(std::size_t t) const { return 1.0 - betas[t - 1]; }
    double alpha_bar(std::size_t t) const { return alpha_bars[t - 1]; }
    double sigma(std::size_t t) const { return sigmas[t - 1]; }

    // Coefficient of the predicted noise inside the posterior mean:
    // mu = (x_t - noise_coef * eps_hat) / sqrt(alpha_t).
    double noise_coef(std::size_t t) const;
    // d mu / d eps_hat, a scalar since the dependence is isotropic.
    double dmu_deps(std::size_t t) const;
};

// Linear beta schedule on [beta_min, beta_max] over T steps.
NoiseSchedule make_linear_schedule(std::size_t T, double beta_min, double beta_max);

// Schedule with explicitly given betas and (optionally) overridden sigmas;
// used by tests that need degenerate noise levels.
NoiseSchedule make_schedule(std::vector<double> betas);
NoiseSchedule make_schedule(std::vector<double> betas, std::vector<double> sigmas);

}  // namespace gardo

#include "schedule.hpp"

#include <cmath>

#include "errors.hpp"

namespace gardo {

double NoiseSchedule::noise_coef(std::size_t t) const {
    return beta(t) / std::sqrt(1.0 - alpha_bar(t));
}

double NoiseSchedule::dmu_deps(std::size_t t) const {
    return -noise_coef(t) / std::sqrt(alpha(t));
}

NoiseSchedule make_linear_schedule(std::size_t T, double beta_min, double beta_max) {
    if (T == 0) throw UsageError("schedule: T must be positive");
    if (!(beta_min > 0.0 && beta_max < 1.0 && beta_min <= beta_max))
        throw UsageError("schedule: betas must satisfy 0 < beta_min <= beta_max < 1");
    std::vector<double> betas(T);
    for (std::size_t i = 0; i < T; ++i) {
        const double frac = T == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(T - 1);
        betas[i] = beta_min + frac * (beta_max - beta_min);
    }
    return make_schedule(std::move(betas));
}

NoiseSchedule make_schedule(std::vector<double> betas) {
    std::vector<double> sigmas(betas.size());
    for (std::size_t i = 0; i < betas.size(); ++i) sigmas[i] = std::sqrt(betas[i]);
    return make_schedule(std::move(betas), std::move(sigmas));
}

NoiseSchedule make_schedule(std::vector<double> betas, std::vector<double> sigmas) {
    if (betas.empty() || sigmas.size() != betas.size())
        throw UsageError("schedule: betas/sigmas must be non-empty and equal length");
    NoiseSchedule s;
    s.T = betas.size();
    s.betas = std::move(betas);
    s.sigmas = std::move(sigmas);
    s.alpha_bars.resize(s.T);
    double prod = 1.0;
    for (std::size_t i = 0; i < s.T; ++i) {
        const double b = s.betas[i];
        if (!(b > 0.0 && b < 1.0)) throw UsageError("schedule: beta out of (0,1)");
        if (!(s.sigmas[i] > 0.0)) throw UsageError("schedule: sigma must be positive");
        prod *= 1.0 - b;
        s.alpha_bars[i] = prod;
    }
    return s;
}

}  // namespace gardo

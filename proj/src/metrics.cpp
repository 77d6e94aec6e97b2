#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "log.hpp"

namespace gardo {

double diversity_metric_from_embeddings(const std::vector<std::vector<double>>& embeddings) {
    const std::size_t g = embeddings.size();
    if (g < 2) throw UsageError("diversity_metric: need at least 2 samples");

    std::vector<double> norms(g);
    for (std::size_t i = 0; i < g; ++i) {
        double n2 = 0.0;
        for (double v : embeddings[i]) n2 += v * v;
        norms[i] = std::sqrt(n2);
    }

    double sum = 0.0;
    long pairs = 0;
    bool warned = false;
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = i + 1; j < g; ++j) {
            if (norms[i] == 0.0 || norms[j] == 0.0) {
                if (!warned) {
                    log_warning("diversity_metric: zero-norm embedding, pair skipped");
                    warned = true;
                }
                continue;
            }
            double dot = 0.0;
            for (std::size_t d = 0; d < embeddings[i].size(); ++d)
                dot += embeddings[i][d] * embeddings[j][d];
            sum += 1.0 - dot / (norms[i] * norms[j]);
            pairs += 1;
        }
    }
    return pairs > 0 ? sum / static_cast<double>(pairs) : 0.0;
}

double diversity_metric(const std::vector<Vec2>& samples, const FeatureMap& fmap) {
    std::vector<std::vector<double>> embeddings;
    embeddings.reserve(samples.size());
    for (const auto& s : samples) embeddings.push_back(fmap.embed(s));
    return diversity_metric_from_embeddings(embeddings);
}

ModeCoverage mode_coverage(const std::vector<Vec2>& samples, const GaussianMixture& mixture,
                           double threshold) {
    if (samples.size() < 256) throw UsageError("mode_coverage: need at least 256 samples");
    const std::size_t n_modes = mixture.components.size();
    ModeCoverage cov;
    cov.per_mode_mass.assign(n_modes, 0.0);

    const double w = 1.0 / static_cast<double>(samples.size());
    for (const auto& s : samples) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < n_modes; ++m) {
            const double d = distance(s, mixture.components[m].mean);
            if (d < best_d) {
                best_d = d;
                best = m;
            }
        }
        const double radius = 3.0 * GaussianMixture::component_std(mixture.components[best]);
        if (best_d <= radius)
            cov.per_mode_mass[best] += w;
        else
            cov.unassigned_mass += w;
    }
    for (double mass : cov.per_mode_mass)
        if (mass >= threshold) cov.covered += 1;
    return cov;
}

JEstimate mean_and_stderr(const std::vector<double>& values) {
    JEstimate est;
    est.samples = static_cast<long>(values.size());
    if (values.empty()) return est;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    if (values.size() > 1) var /= static_cast<double>(values.size() - 1);
    est.mean = mean;
    est.stderr_ = std::sqrt(var / static_cast<double>(values.size()));
    return est;
}

JEstimate estimate_j(const MlpParams& policy, const NoiseSchedule& sched, const RewardSpec& reward,
                     long n, Rng rng) {
    if (n < 256) throw UsageError("estimate_j: need at least 256 rollouts");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        Rng traj_rng = rng.derive(static_cast<uint64_t>(i) + 1);
        const auto [zx, zy] = traj_rng.normal2();
        const Trajectory traj = sample_trajectory(policy, sched, {zx, zy}, traj_rng);
        values.push_back(evaluate(reward, traj.x0()));
    }
    return mean_and_stderr(values);
}

Vec2 GridDensity::cell_center(std::size_t ix, std::size_t iy) const {
    const double dx = (x_max - x_min) / static_cast<double>(nx);
    const double dy = (y_max - y_min) / static_cast<double>(ny);
    return {x_min + (static_cast<double>(ix) + 0.5) * dx,
            y_min + (static_cast<double>(iy) + 0.5) * dy};
}

GridDensity grid_from_mixture(const GaussianMixture& mixture, std::size_t n, double x_min,
                              double x_max, double y_min, double y_max) {
    GridDensity g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.y_min = y_min;
    g.y_max = y_max;
    g.nx = g.ny = n;
    g.values.resize(n * n);
    double sum = 0.0;
    for (std::size_t iy = 0; iy < n; ++iy)
        for (std::size_t ix = 0; ix < n; ++ix) {
            const double d = mixture.density(g.cell_center(ix, iy));
            g.at(ix, iy) = d;
            sum += d;
        }
    for (auto& v : g.values) v /= sum;
    return g;
}

GridSolution optimal_grid_solution(const GridDensity& ref_density, const RewardSpec& proxy,
                                   double beta) {
    if (!(beta > 0.0)) throw UsageError("optimal_grid_solution: beta must be positive");
    GridSolution sol;
    sol.density = ref_density;
    GridDensity& out = sol.density;

    // Work entirely in logs; exp(R/beta) overflows directly for small beta.
    std::vector<double> log_vals(out.values.size());
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t iy = 0; iy < out.ny; ++iy)
        for (std::size_t ix = 0; ix < out.nx; ++ix) {
            const std::size_t idx = iy * out.nx + ix;
            const double ref = std::max(ref_density.values[idx], 1e-300);
            const double lv = std::log(ref) + evaluate(proxy, out.cell_center(ix, iy)) / beta;
            log_vals[idx] = lv;
            max_log = std::max(max_log, lv);
        }
    double z = 0.0;
    for (double lv : log_vals) z += std::exp(lv - max_log);
    sol.log_z = max_log + std::log(z);
    for (std::size_t i = 0; i < log_vals.size(); ++i)
        out.values[i] = std::exp(log_vals[i] - sol.log_z);
    return sol;
}

double verify_proposition1(const GridDensity& p_star, const GridDensity& ref_density,
                           const RewardSpec& proxy, double beta, int pairs, Rng rng) {
    if (p_star.nx != ref_density.nx || p_star.ny != ref_density.ny)
        throw UsageError("verify_proposition1: grids must match");
    const std::size_t n_cells = p_star.values.size();

    auto draw_cell = [&]() -> std::size_t {
        // Rejection: cells with negligible reference density carry no
        // meaningful ratio and are resampled.
        for (int tries = 0; tries < 100000; ++tries) {
            const std::size_t idx = static_cast<std::size_t>(rng.next_u64() % n_cells);
            if (ref_density.values[idx] > 1e-12 && p_star.values[idx] > 0.0) return idx;
        }
        throw RuntimeError("verify_proposition1: no usable grid cells");
    };

    double max_rel_err = 0.0;
    for (int p = 0; p < pairs; ++p) {
        const std::size_t i1 = draw_cell();
        const std::size_t i2 = draw_cell();
        const Vec2 x1 = p_star.cell_center(i1 % p_star.nx, i1 / p_star.nx);
        const Vec2 x2 = p_star.cell_center(i2 % p_star.nx, i2 / p_star.nx);
        const double log_actual = std::log(p_star.values[i1]) - std::log(p_star.values[i2]);
        const double log_expected = std::log(ref_density.values[i1]) -
                                    std::log(ref_density.values[i2]) +
                                    (evaluate(proxy, x1) - evaluate(proxy, x2)) / beta;
        const double rel_err = std::abs(std::expm1(log_actual - log_expected));
        max_rel_err = std::max(max_rel_err, rel_err);
    }
    return max_rel_err;
}

}  // namespace gardo

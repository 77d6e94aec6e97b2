#pragma once

#include <string>
#include <vector>

#include "diffusion.hpp"
#include "feature_map.hpp"
#include "mixture.hpp"
#include "rewards.hpp"

namespace gardo {

// Mean pairwise cosine distance over a sample group's embeddings.
// Zero-norm embeddings are skipped with an adjusted pair count.
double diversity_metric(const std::vector<Vec2>& samples, const FeatureMap& fmap);
double diversity_metric_from_embeddings(const std::vector<std::vector<double>>& embeddings);

struct ModeCoverage {
    int covered = 0;
    std::vector<double> per_mode_mass;
    double unassigned_mass = 0.0;
};

// Assigns each sample to its nearest mode if within 3 component-stds of
// that mode's center; a mode counts as covered when it holds at least
// `threshold` of the total sample mass.
ModeCoverage mode_coverage(const std::vector<Vec2>& samples, const GaussianMixture& mixture,
                           double threshold = 0.02);

// Monte-Carlo estimate of E_pi[R(x_0)] over n independent rollouts.
JEstimate estimate_j(const MlpParams& policy, const NoiseSchedule& sched, const RewardSpec& reward,
                     long n, Rng rng);

JEstimate mean_and_stderr(const std::vector<double>& values);

// Normalized density on a rectangular cell grid.
struct GridDensity {
    double x_min = -5.0, x_max = 5.0;
    double y_min = -5.0, y_max = 5.0;
    std::size_t nx = 201, ny = 201;
    std::vector<double> values;  // row-major over (iy, ix), sums to 1

    Vec2 cell_center(std::size_t ix, std::size_t iy) const;
    double& at(std::size_t ix, std::size_t iy) { return values[iy * nx + ix]; }
    double at(std::size_t ix, std::size_t iy) const { return values[iy * nx + ix]; }
};

// Analytic mixture density evaluated at cell centers, normalized to sum 1.
GridDensity grid_from_mixture(const GaussianMixture& mixture, std::size_t n = 201,
                              double x_min = -5.0, double x_max = 5.0, double y_min = -5.0,
                              double y_max = 5.0);

struct GridSolution {
    GridDensity density;
    double log_z = 0.0;  // log of the pre-normalization sum
};

// Cellwise ref(x) * exp(R(x)/beta), renormalized; computed in log space.
GridSolution optimal_grid_solution(const GridDensity& ref_density, const RewardSpec& proxy,
                                   double beta);

// Checks the closed-form pairwise ratio identity of the KL-regularized
// optimum on random cell pairs; returns the max relative error.
double verify_proposition1(const GridDensity& p_star, const GridDensity& ref_density,
                           const RewardSpec& proxy, double beta, int pairs, Rng rng);

// Quantitative summary of one policy evaluation.
struct EvalReport {
    std::string preset;
    double mean_proxy = 0.0;
    double se_proxy = 0.0;
    double mean_true = 0.0;
    double se_true = 0.0;
    double diversity = 0.0;
    ModeCoverage coverage;
    bool has_reference = false;  // hacked/gap are meaningful only when set
    bool hacked = false;
    double gap = 0.0;
    long samples = 0;
    uint64_t seed = 0;
};

}  // namespace gardo

#pragma once

#include <vector>

#include "rng.hpp"
#include "vec2.hpp"

namespace gardo {

// One 2D Gaussian mixture component with SPD covariance.
struct MixtureComponent {
    Vec2 mean;
    double cov_xx = 1.0;
    double cov_xy = 0.0;
    double cov_yy = 1.0;
    double weight = 1.0;
};

struct GaussianMixture {
    std::vector<MixtureComponent> components;

    Vec2 sample(Rng& rng) const;
    double density(const Vec2& x) const;
    double log_density(const Vec2& x) const;

    // Largest marginal std of a component, used for assignment radii.
    static double component_std(const MixtureComponent& c);
};

// Throws UsageError if weights do not sum to 1 (tolerance 1e-12) or a
// covariance is not SPD.
void validate_mixture(const GaussianMixture& m);

// Fig. 3 style world: n_outer equally spaced isotropic modes on a circle
// plus one central mode whose weight is central_rel times an outer weight.
GaussianMixture make_ring_mixture(int n_outer, double radius, double std_dev,
                                  double central_rel_weight);

}  // namespace gardo

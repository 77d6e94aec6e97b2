#include "mixture.hpp"

#include <cmath>

#include "errors.hpp"

namespace gardo {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Cholesky factor of [[xx, xy], [xy, yy]]: lower triangular l11,l21,l22.
struct Chol {
    double l11, l21, l22;
};

Chol cholesky2(const MixtureComponent& c) {
    const double l11 = std::sqrt(c.cov_xx);
    const double l21 = c.cov_xy / l11;
    const double d = c.cov_yy - l21 * l21;
    if (!(d > 0.0)) throw UsageError("mixture: covariance not positive definite");
    return {l11, l21, std::sqrt(d)};
}

}  // namespace

double GaussianMixture::component_std(const MixtureComponent& c) {
    // Largest eigenvalue of the 2x2 covariance.
    const double tr = c.cov_xx + c.cov_yy;
    const double det = c.cov_xx * c.cov_yy - c.cov_xy * c.cov_xy;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return std::sqrt(tr / 2.0 + disc);
}

void validate_mixture(const GaussianMixture& m) {
    if (m.components.empty()) throw UsageError("mixture: no components");
    double sum = 0.0;
    for (const auto& c : m.components) {
        if (!(c.weight > 0.0)) throw UsageError("mixture: weights must be positive");
        sum += c.weight;
        cholesky2(c);  // SPD check
    }
    if (std::abs(sum - 1.0) > 1e-12) throw UsageError("mixture: weights must sum to 1");
}

Vec2 GaussianMixture::sample(Rng& rng) const {
    const double u = rng.uniform();
    double acc = 0.0;
    const MixtureComponent* pick = &components.back();
    for (const auto& c : components) {
        acc += c.weight;
        if (u <= acc) {
            pick = &c;
            break;
        }
    }
    const Chol l = cholesky2(*pick);
    const auto [z1, z2] = rng.normal2();
    return {pick->mean.x + l.l11 * z1, pick->mean.y + l.l21 * z1 + l.l22 * z2};
}

double GaussianMixture::density(const Vec2& x) const {
    double total = 0.0;
    for (const auto& c : components) {
        const double det = c.cov_xx * c.cov_yy - c.cov_xy * c.cov_xy;
        const double dx = x.x - c.mean.x;
        const double dy = x.y - c.mean.y;
        // Quadratic form with the inverse covariance.
        const double q = (c.cov_yy * dx * dx - 2.0 * c.cov_xy * dx * dy + c.cov_xx * dy * dy) / det;
        total += c.weight * std::exp(-0.5 * q) / (kTwoPi * std::sqrt(det));
    }
    return total;
}

double GaussianMixture::log_density(const Vec2& x) const {
    return std::log(std::max(density(x), 1e-300));
}

GaussianMixture make_ring_mixture(int n_outer, double radius, double std_dev,
                                  double central_rel_weight) {
    GaussianMixture m;
    const double var = std_dev * std_dev;
    const double outer_w = 1.0 / (n_outer + central_rel_weight);
    for (int i = 0; i < n_outer; ++i) {
        const double angle = kTwoPi * i / n_outer;
        MixtureComponent c;
        c.mean = {radius * std::cos(angle), radius * std::sin(angle)};
        c.cov_xx = c.cov_yy = var;
        c.weight = outer_w;
        m.components.push_back(c);
    }
    MixtureComponent center;
    center.mean = {0.0, 0.0};
    center.cov_xx = center.cov_yy = var;
    center.weight = central_rel_weight * outer_w;
    m.components.push_back(center);
    // Remove accumulated rounding so weights sum to 1 exactly.
    double sum = 0.0;
    for (const auto& c : m.components) sum += c.weight;
    for (auto& c : m.components) c.weight /= sum;
    return m;
}

}  // namespace gardo

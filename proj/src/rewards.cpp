#include "rewards.hpp"

#include <cmath>

#include "errors.hpp"

namespace gardo {

double RewardSpec::max_amplitude() const {
    double m = 0.0;
    for (const auto& b : bumps) m = std::max(m, std::abs(b.amplitude));
    return m;
}

void validate_reward(const RewardSpec& spec) {
    for (const auto& b : spec.bumps)
        if (!(b.width > 0.0)) throw UsageError("reward: bump widths must be positive");
}

double evaluate(const RewardSpec& spec, const Vec2& x) {
    double v = spec.baseline;
    for (const auto& b : spec.bumps) {
        const double d2 = (x - b.center).norm2();
        v += b.amplitude * std::exp(-d2 / (2.0 * b.width * b.width));
    }
    return v;
}

HackingVerdict hacking_gap(const JEstimate& policy_true_j, const JEstimate& reference_true_j) {
    if (policy_true_j.samples < 256 || reference_true_j.samples < 256)
        throw UsageError("hacking_gap: need at least 256 samples per estimate");
    HackingVerdict v;
    v.margin = 2.0 * std::sqrt(policy_true_j.stderr_ * policy_true_j.stderr_ +
                               reference_true_j.stderr_ * reference_true_j.stderr_);
    v.gap = reference_true_j.mean - policy_true_j.mean;
    v.hacked = policy_true_j.mean < reference_true_j.mean - v.margin;
    return v;
}

}  // namespace gardo

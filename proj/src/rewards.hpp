#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vec2.hpp"

namespace gardo {

enum class RewardRole : uint8_t { kTrue, kProxy, kAuxiliary };

struct RewardBump {
    Vec2 center;
    double amplitude = 1.0;
    double width = 0.4;
};

// Smooth scalar field over R^2: baseline plus a sum of Gaussian bumps.
struct RewardSpec {
    std::vector<RewardBump> bumps;
    double baseline = 0.0;
    RewardRole role = RewardRole::kTrue;

    double max_amplitude() const;
};

void validate_reward(const RewardSpec& spec);

double evaluate(const RewardSpec& spec, const Vec2& x);

// Proxy, true and K auxiliary reward fields for one named world.
struct HackingWorld {
    RewardSpec true_reward;
    RewardSpec proxy_reward;
    std::vector<RewardSpec> auxiliaries;
};

// Monte-Carlo estimate of J(pi, R) = E_pi[R(x_0)].
struct JEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
};

struct HackingVerdict {
    bool hacked = false;
    double gap = 0.0;     // reference J minus policy J under the true reward
    double margin = 0.0;  // 2x combined standard error
};

// Definition-style check: the policy counts as hacked when its true-reward
// objective falls below the reference's by more than twice the combined
// standard error. Refuses estimates built from fewer than 256 samples.
HackingVerdict hacking_gap(const JEstimate& policy_true_j, const JEstimate& reference_true_j);

}  // namespace gardo

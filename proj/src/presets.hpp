#pragma once

#include <string>
#include <vector>

#include "mixture.hpp"
#include "rewards.hpp"

namespace gardo {

// A named world: the pretraining mixture plus the reward fields used for
// fine-tuning and evaluation. Presets sharing a mixture share a mixture_id
// (and therefore a pretrained checkpoint).
struct WorldPreset {
    std::string name;
    std::string description;
    std::string mixture_id;
    GaussianMixture mixture;
    HackingWorld rewards;
    Vec2 spurious_center{0.0, 0.0};  // zero-width marker when absent
    double spurious_width = 0.0;
};

const WorldPreset& get_preset(const std::string& name);
std::vector<std::string> preset_names();

// The reward triple of a registered preset.
HackingWorld make_hacking_world(const std::string& preset);

}  // namespace gardo

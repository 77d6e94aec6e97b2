#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feature_map.hpp"
#include "rewards.hpp"

namespace gardo {

enum class Method : uint8_t { kGrpo, kGrpoNoStd, kGrpoKl, kGardo, kGardoNoDiv };

std::string method_name(Method m);
Method parse_method(const std::string& name);

// Flat key = value run configuration. Unset keys take the defaults below;
// unknown keys are rejected with the offending key named.
struct TrainConfig {
    int format_version = 1;
    std::string preset = "fig3";
    Method method = Method::kGardo;
    uint64_t seed = 1;

    double beta = 0.04;
    double eps_clip = 1e-4;
    double eps_kl = 1e-4;
    long reset_interval = 100;  // m
    long window = 20;           // W
    double k0 = 0.1;
    long group_size = 24;  // G
    long timesteps = 10;   // T
    double lr = 3e-4;

    long pretrain_steps = 20000;
    long pretrain_batch = 64;
    double pretrain_lr = 1e-3;
    long iterations = 400;
    bool use_std = true;
    bool diversity = true;

    FeatureMapKind fmap = FeatureMapKind::kIdentity;
    Vec2 fmap_anchor{5.0, 5.0};
    long fmap_dim = 2;

    long ckpt_every = 50;
    long eval_samples = 256;
    long hidden = 64;
    long t_embed = 16;
    double beta_min = 0.02;
    double beta_max = 0.75;

    std::string pretrain_ckpt;  // empty: <run_root>/pretrain-<mixture>/checkpoint_final.ckpt
    std::string run_name;       // empty: <preset>-<method>-s<seed>

    // Optional inline reward overrides, comma-separated cx:cy:amp:width
    // quadruples. Empty means "use the preset's field".
    std::vector<RewardBump> reward_true_override;
    std::vector<RewardBump> reward_proxy_override;

    FeatureMap feature_map() const;
    // Whether the method/flag combination shapes advantages / applies std
    // normalization / gates+adapts the KL path.
    bool shaping_enabled() const;
    bool std_enabled() const;
    bool gating_enabled() const;    // adaptive gate + reference resets
    bool global_kl_enabled() const; // static-reference ungated KL
};

TrainConfig default_config();

// Parses a config file. Throws UsageError naming the key and line on any
// unknown key, type error, or out-of-range value.
TrainConfig load_config(const std::string& path);
TrainConfig parse_config_text(const std::string& text, const std::string& origin);

// Applies one "key=value" override (CLI flags reuse the file grammar).
void apply_override(TrainConfig& cfg, const std::string& key, const std::string& value);

void validate_config(const TrainConfig& cfg);

// Full key = value snapshot; load_config(serialize(cfg)) == cfg.
std::string serialize_config(const TrainConfig& cfg);

bool operator==(const TrainConfig& a, const TrainConfig& b);

}  // namespace gardo

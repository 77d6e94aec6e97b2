#include "presets.hpp"

#include <cmath>
#include <map>

#include "errors.hpp"
#include "rng.hpp"

namespace gardo {

namespace {

constexpr double kBumpWidth = 0.4;
constexpr double kTrueAmplitude = 1.0;
constexpr double kSpuriousAmplitude = 1.5;
constexpr int kAuxCount = 2;

RewardSpec bumps_on_modes(const GaussianMixture& mixture) {
    RewardSpec spec;
    spec.role = RewardRole::kTrue;
    for (const auto& c : mixture.components)
        spec.bumps.push_back({c.mean, kTrueAmplitude, kBumpWidth});
    return spec;
}

// Auxiliary fields are the true reward with jittered centers (std 0.1) and
// amplitudes (+-10%), no spurious bump. The jitter stream is fixed per
// preset so auxiliaries are identical across runs.
std::vector<RewardSpec> make_auxiliaries(const RewardSpec& true_reward, uint64_t jitter_seed) {
    std::vector<RewardSpec> auxes;
    Rng rng(jitter_seed);
    for (int k = 0; k < kAuxCount; ++k) {
        Rng aux_rng = rng.derive(static_cast<uint64_t>(k) + 1);
        RewardSpec aux = true_reward;
        aux.role = RewardRole::kAuxiliary;
        for (auto& b : aux.bumps) {
            const auto [jx, jy] = aux_rng.normal2();
            b.center.x += 0.1 * jx;
            b.center.y += 0.1 * jy;
            b.amplitude *= 1.0 + 0.2 * (aux_rng.uniform() - 0.5);
        }
        auxes.push_back(std::move(aux));
    }
    return auxes;
}

// Weighted sum of reward fields; sums of Gaussian bumps stay in the same
// family, so the combination is again a RewardSpec.
RewardSpec weighted_sum(const std::vector<std::pair<double, const RewardSpec*>>& terms) {
    RewardSpec out;
    out.role = RewardRole::kProxy;
    for (const auto& [w, spec] : terms) {
        out.baseline += w * spec->baseline;
        for (auto b : spec->bumps) {
            b.amplitude *= w;
            out.bumps.push_back(b);
        }
    }
    return out;
}

WorldPreset make_single_gaussian() {
    WorldPreset p;
    p.name = "single-gaussian";
    p.description = "one standard-normal mode at the origin, reward bump on it";
    p.mixture_id = "single-gaussian";
    MixtureComponent c;
    c.mean = {0.0, 0.0};
    c.weight = 1.0;
    p.mixture.components.push_back(c);

    p.rewards.true_reward.bumps.push_back({{0.0, 0.0}, 1.0, 1.0});
    p.rewards.proxy_reward = p.rewards.true_reward;
    p.rewards.proxy_reward.role = RewardRole::kProxy;
    p.rewards.auxiliaries = make_auxiliaries(p.rewards.true_reward, 0x51e9u);
    return p;
}

WorldPreset make_fig3() {
    WorldPreset p;
    p.name = "fig3";
    p.description = "8 ring modes + 0.1x central mode; proxy equals the true reward";
    p.mixture_id = "fig3";
    p.mixture = make_ring_mixture(8, 3.0, 0.25, 0.1);
    p.rewards.true_reward = bumps_on_modes(p.mixture);
    p.rewards.proxy_reward = p.rewards.true_reward;
    p.rewards.proxy_reward.role = RewardRole::kProxy;
    p.rewards.auxiliaries = make_auxiliaries(p.rewards.true_reward, 0xf193u);
    return p;
}

WorldPreset make_fig3_hackable() {
    WorldPreset p = make_fig3();
    p.name = "fig3-hackable";
    p.description = "fig3 plus a spurious high-amplitude proxy bump off-support";
    // Radially outside the (3,0) mode, past its 3-sigma region but within
    // reach of rollout exploration, and inside the oracle grid.
    p.spurious_center = {4.25, 0.0};
    p.spurious_width = kBumpWidth;
    p.rewards.proxy_reward.bumps.push_back({p.spurious_center, kSpuriousAmplitude, kBumpWidth});
    return p;
}

WorldPreset make_fig3_multireward() {
    WorldPreset p = make_fig3_hackable();
    p.name = "fig3-multireward";
    p.description = "fig3-hackable with proxy = 0.8*proxy + 0.1*aux1 + 0.1*aux2";
    p.rewards.proxy_reward = weighted_sum({{0.8, &p.rewards.proxy_reward},
                                           {0.1, &p.rewards.auxiliaries[0]},
                                           {0.1, &p.rewards.auxiliaries[1]}});
    return p;
}

const std::map<std::string, WorldPreset>& registry() {
    static const std::map<std::string, WorldPreset> presets = [] {
        std::map<std::string, WorldPreset> m;
        for (auto&& p : {make_single_gaussian(), make_fig3(), make_fig3_hackable(),
                         make_fig3_multireward()})
            m.emplace(p.name, std::move(p));
        return m;
    }();
    return presets;
}

}  // namespace

const WorldPreset& get_preset(const std::string& name) {
    const auto& m = registry();
    auto it = m.find(name);
    if (it == m.end()) throw UsageError("unknown preset: " + name);
    return it->second;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, preset] : registry()) names.push_back(name);
    return names;
}

HackingWorld make_hacking_world(const std::string& preset) { return get_preset(preset).rewards; }

}  // namespace gardo

#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "errors.hpp"

namespace gardo {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& key,
                       const std::string& what) {
    std::ostringstream os;
    os << origin << ":" << line << ": key '" << key << "': " << what;
    throw UsageError(os.str());
}

double parse_double(const std::string& v) {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
}

long parse_long(const std::string& v) {
    std::size_t pos = 0;
    long n = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return n;
}

uint64_t parse_u64(const std::string& v) {
    std::size_t pos = 0;
    unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return n;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("expected true/false");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<RewardBump> parse_bumps(const std::string& v) {
    std::vector<RewardBump> bumps;
    if (trim(v).empty()) return bumps;
    for (const std::string& item : split(v, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 4) throw std::invalid_argument("expected cx:cy:amp:width");
        RewardBump b;
        b.center = {parse_double(parts[0]), parse_double(parts[1])};
        b.amplitude = parse_double(parts[2]);
        b.width = parse_double(parts[3]);
        bumps.push_back(b);
    }
    return bumps;
}

std::string format_bumps(const std::vector<RewardBump>& bumps) {
    std::string out;
    for (std::size_t i = 0; i < bumps.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(bumps[i].center.x) + ":" + fmt_double(bumps[i].center.y) + ":" +
               fmt_double(bumps[i].amplitude) + ":" + fmt_double(bumps[i].width);
    }
    return out;
}

using Setter = std::function<void(TrainConfig&, const std::string&)>;
using Getter = std::function<std::string(const TrainConfig&)>;

struct KeySpec {
    Setter set;
    Getter get;
};

const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> table = [] {
        std::map<std::string, KeySpec> t;
        auto add = [&t](const std::string& key, Setter s, Getter g) {
            t.emplace(key, KeySpec{std::move(s), std::move(g)});
        };
        add("format_version",
            [](TrainConfig& c, const std::string& v) { c.format_version = static_cast<int>(parse_long(v)); },
            [](const TrainConfig& c) { return std::to_string(c.format_version); });
        add("preset", [](TrainConfig& c, const std::string& v) { c.preset = v; },
            [](const TrainConfig& c) { return c.preset; });
        add("method", [](TrainConfig& c, const std::string& v) { c.method = parse_method(v); },
            [](const TrainConfig& c) { return method_name(c.method); });
        add("seed", [](TrainConfig& c, const std::string& v) { c.seed = parse_u64(v); },
            [](const TrainConfig& c) { return std::to_string(c.seed); });
        add("beta", [](TrainConfig& c, const std::string& v) { c.beta = parse_double(v); },
            [](const TrainConfig& c) { return fmt_double(c.beta); });
        add("eps_clip", [](TrainConfig& c, const std::string& v) { c.eps_clip = parse_double(v); },
            [](const TrainConfig& c) { return fmt_double(c.eps_clip); });
        add("eps_kl", [](TrainConfig& c, const std::string& v) { c.eps_kl = parse_double(v); },
            [](const TrainConfig& c) { return fmt_double(c.eps_kl); });
        add("reset_interval",
            [](TrainConfig& c, const std::string& v) { c.reset_interval = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.reset_interval); });
        add("window", [](TrainConfig& c, const std::string& v) { c.window = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.window); });
        add("k0", [](TrainConfig& c, const std::string& v) { c.k0 = parse_double(v); },
            [](const TrainConfig& c) { return fmt_double(c.k0); });
        add("group_size", [](TrainConfig& c, const std::string& v) { c.group_size = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.group_size); });
        add("timesteps", [](TrainConfig& c, const std::string& v) { c.timesteps = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.timesteps); });
        add("lr", [](TrainConfig& c, const std::string& v) { c.lr = parse_double(v); },
            [](const TrainConfig& c) { return fmt_double(c.lr); });
        add("pretrain_steps",
            [](TrainConfig& c, const std::string& v) { c.pretrain_steps = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.pretrain_steps); });
        add("pretrain_batch",
            [](TrainConfig& c, const std::string& v) { c.pretrain_batch = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.pretrain_batch); });
        add("pretrain_lr",
            [](TrainConfig& c, const std::string& v) { c.pretrain_lr = parse_double(v); },
            [](const TrainConfig& c) { return fmt_double(c.pretrain_lr); });
        add("iterations", [](TrainConfig& c, const std::string& v) { c.iterations = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.iterations); });
        add("use_std", [](TrainConfig& c, const std::string& v) { c.use_std = parse_bool(v); },
            [](const TrainConfig& c) { return c.use_std ? "true" : "false"; });
        add("diversity", [](TrainConfig& c, const std::string& v) { c.diversity = parse_bool(v); },
            [](const TrainConfig& c) { return c.diversity ? "true" : "false"; });
        add("fmap",
            [](TrainConfig& c, const std::string& v) {
                if (v == "identity")
                    c.fmap = FeatureMapKind::kIdentity;
                else if (v == "random-projection")
                    c.fmap = FeatureMapKind::kRandomProjection;
                else
                    throw std::invalid_argument("expected identity or random-projection");
            },
            [](const TrainConfig& c) {
                return c.fmap == FeatureMapKind::kIdentity ? "identity" : "random-projection";
            });
        add("fmap_anchor",
            [](TrainConfig& c, const std::string& v) {
                const auto parts = split(v, ',');
                if (parts.size() != 2) throw std::invalid_argument("expected x,y");
                c.fmap_anchor = {parse_double(parts[0]), parse_double(parts[1])};
            },
            [](const TrainConfig& c) {
                return fmt_double(c.fmap_anchor.x) + ", " + fmt_double(c.fmap_anchor.y);
            });
        add("fmap_dim", [](TrainConfig& c, const std::string& v) { c.fmap_dim = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.fmap_dim); });
        add("ckpt_every", [](TrainConfig& c, const std::string& v) { c.ckpt_every = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.ckpt_every); });
        add("eval_samples",
            [](TrainConfig& c, const std::string& v) { c.eval_samples = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.eval_samples); });
        add("hidden", [](TrainConfig& c, const std::string& v) { c.hidden = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.hidden); });
        add("t_embed", [](TrainConfig& c, const std::string& v) { c.t_embed = parse_long(v); },
            [](const TrainConfig& c) { return std::to_string(c.t_embed); });
        add("beta_min", [](TrainConfig& c, const std::string& v) { c.beta_min = parse_double(v); },
            [](const TrainConfig& c) { return fmt_double(c.beta_min); });
        add("beta_max", [](TrainConfig& c, const std::string& v) { c.beta_max = parse_double(v); },
            [](const TrainConfig& c) { return fmt_double(c.beta_max); });
        add("pretrain_ckpt", [](TrainConfig& c, const std::string& v) { c.pretrain_ckpt = v; },
            [](const TrainConfig& c) { return c.pretrain_ckpt; });
        add("run_name", [](TrainConfig& c, const std::string& v) { c.run_name = v; },
            [](const TrainConfig& c) { return c.run_name; });
        add("reward_true",
            [](TrainConfig& c, const std::string& v) { c.reward_true_override = parse_bumps(v); },
            [](const TrainConfig& c) { return format_bumps(c.reward_true_override); });
        add("reward_proxy",
            [](TrainConfig& c, const std::string& v) { c.reward_proxy_override = parse_bumps(v); },
            [](const TrainConfig& c) { return format_bumps(c.reward_proxy_override); });
        return t;
    }();
    return table;
}

void check_range(bool ok, const std::string& key, const std::string& what) {
    if (!ok) throw UsageError("config: key '" + key + "': " + what);
}

}  // namespace

std::string method_name(Method m) {
    switch (m) {
        case Method::kGrpo: return "grpo";
        case Method::kGrpoNoStd: return "grpo-nostd";
        case Method::kGrpoKl: return "grpo-kl";
        case Method::kGardo: return "gardo";
        case Method::kGardoNoDiv: return "gardo-no-div";
    }
    return "gardo";
}

Method parse_method(const std::string& name) {
    if (name == "grpo") return Method::kGrpo;
    if (name == "grpo-nostd") return Method::kGrpoNoStd;
    if (name == "grpo-kl") return Method::kGrpoKl;
    if (name == "gardo") return Method::kGardo;
    if (name == "gardo-no-div") return Method::kGardoNoDiv;
    throw std::invalid_argument("unknown method '" + name +
                                "' (grpo, grpo-nostd, grpo-kl, gardo, gardo-no-div)");
}

FeatureMap TrainConfig::feature_map() const {
    if (fmap == FeatureMapKind::kIdentity) return make_identity_map(fmap_anchor);
    return make_projection_map(static_cast<std::size_t>(fmap_dim), seed ^ 0xfeedull, fmap_anchor);
}

bool TrainConfig::shaping_enabled() const { return method == Method::kGardo && diversity; }

bool TrainConfig::std_enabled() const {
    return method == Method::kGrpoNoStd ? false : use_std;
}

bool TrainConfig::gating_enabled() const {
    return method == Method::kGardo || method == Method::kGardoNoDiv;
}

bool TrainConfig::global_kl_enabled() const {
    return (method == Method::kGrpo || method == Method::kGrpoNoStd ||
            method == Method::kGrpoKl) &&
           beta > 0.0;
}

TrainConfig default_config() { return TrainConfig{}; }

TrainConfig parse_config_text(const std::string& text, const std::string& origin) {
    TrainConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, line, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto& table = key_table();
        auto it = table.find(key);
        if (it == table.end()) fail(origin, lineno, key, "unknown key");
        try {
            it->second.set(cfg, value);
        } catch (const std::exception& e) {
            fail(origin, lineno, key, std::string("bad value '") + value + "': " + e.what());
        }
    }
    validate_config(cfg);
    return cfg;
}

TrainConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("config: cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_config_text(text, path);
}

void apply_override(TrainConfig& cfg, const std::string& key, const std::string& value) {
    const auto& table = key_table();
    auto it = table.find(key);
    if (it == table.end()) throw UsageError("config: unknown key '" + key + "'");
    try {
        it->second.set(cfg, value);
    } catch (const std::exception& e) {
        throw UsageError("config: key '" + key + "': bad value '" + value + "': " + e.what());
    }
}

void validate_config(const TrainConfig& cfg) {
    check_range(cfg.format_version == 1, "format_version", "unsupported version");
    check_range(!cfg.preset.empty(), "preset", "must not be empty");
    check_range(cfg.beta >= 0.0 && std::isfinite(cfg.beta), "beta", "must be >= 0");
    check_range(cfg.eps_clip > 0.0, "eps_clip", "must be > 0");
    check_range(cfg.eps_kl > 0.0, "eps_kl", "must be > 0");
    check_range(cfg.reset_interval >= 1, "reset_interval", "must be >= 1");
    check_range(cfg.window >= 1, "window", "must be >= 1");
    check_range(cfg.k0 > 0.0 && cfg.k0 <= 1.0, "k0", "must lie in (0, 1]");
    check_range(cfg.group_size >= 2, "group_size", "must be >= 2");
    check_range(cfg.timesteps >= 1, "timesteps", "must be >= 1");
    check_range(cfg.lr > 0.0, "lr", "must be > 0");
    check_range(cfg.pretrain_steps >= 0, "pretrain_steps", "must be >= 0");
    check_range(cfg.pretrain_batch >= 1, "pretrain_batch", "must be >= 1");
    check_range(cfg.pretrain_lr > 0.0, "pretrain_lr", "must be > 0");
    check_range(cfg.iterations >= 0, "iterations", "must be >= 0");
    check_range(cfg.fmap_dim >= 1, "fmap_dim", "must be >= 1");
    check_range(cfg.ckpt_every >= 1, "ckpt_every", "must be >= 1");
    check_range(cfg.eval_samples >= 256, "eval_samples", "must be >= 256");
    check_range(cfg.hidden >= 1, "hidden", "must be >= 1");
    check_range(cfg.t_embed >= 2 && cfg.t_embed % 2 == 0, "t_embed", "must be even and >= 2");
    check_range(cfg.beta_min > 0.0 && cfg.beta_max < 1.0 && cfg.beta_min <= cfg.beta_max,
                "beta_min", "schedule must satisfy 0 < beta_min <= beta_max < 1");
    if (cfg.method == Method::kGrpoKl)
        check_range(cfg.beta > 0.0, "beta", "grpo-kl requires beta > 0");
    for (const auto& b : cfg.reward_true_override)
        check_range(b.width > 0.0, "reward_true", "bump widths must be > 0");
    for (const auto& b : cfg.reward_proxy_override)
        check_range(b.width > 0.0, "reward_proxy", "bump widths must be > 0");
}

std::string serialize_config(const TrainConfig& cfg) {
    std::ostringstream os;
    os << "# resolved run configuration\n";
    for (const auto& [key, spec] : key_table()) os << key << " = " << spec.get(cfg) << "\n";
    return os.str();
}

bool operator==(const TrainConfig& a, const TrainConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

}  // namespace gardo

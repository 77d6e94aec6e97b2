// Command-line front end. Talks to the core exclusively through the
// shared library's C API in gardo/gardo.h.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gardo/gardo.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

int status_to_exit(gardo_status s) {
    switch (s) {
        case GARDO_OK: return kExitOk;
        case GARDO_ERR_USAGE: return kExitUsage;
        case GARDO_ERR_RUNTIME: return kExitRuntime;
    }
    return kExitRuntime;
}

int report_failure(gardo_status s) {
    std::fprintf(stderr, "error: %s\n", gardo_last_error());
    return status_to_exit(s);
}

struct ConfigGuard {
    gardo_config* cfg = nullptr;
    ~ConfigGuard() { gardo_config_free(cfg); }
};

// Shared --config/--set/--preset/--seed handling for run subcommands.
struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string method;
    std::string seed;
    std::vector<std::string> overrides;  // key=value

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (flat key = value)");
        cmd->add_option("--preset", preset, "world preset name");
        cmd->add_option("--method", method, "training method tag");
        cmd->add_option("--seed", seed, "run seed");
        cmd->add_option("--set", overrides, "extra key=value overrides")->take_all();
    }

    int build(ConfigGuard& guard) const {
        gardo_status s = config_path.empty() ? gardo_config_create(&guard.cfg)
                                             : gardo_config_load(config_path.c_str(), &guard.cfg);
        if (s != GARDO_OK) return report_failure(s);
        auto set = [&](const char* key, const std::string& value) -> int {
            const gardo_status st = gardo_config_set(guard.cfg, key, value.c_str());
            return st == GARDO_OK ? kExitOk : report_failure(st);
        };
        if (!preset.empty())
            if (int rc = set("preset", preset)) return rc;
        if (!method.empty())
            if (int rc = set("method", method)) return rc;
        if (!seed.empty())
            if (int rc = set("seed", seed)) return rc;
        for (const std::string& kv : overrides) {
            const std::size_t eq = kv.find('=');
            if (eq == std::string::npos) {
                std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
                return kExitUsage;
            }
            const gardo_status st = gardo_config_set(guard.cfg, kv.substr(0, eq).c_str(),
                                                     kv.substr(eq + 1).c_str());
            if (st != GARDO_OK) return report_failure(st);
        }
        const gardo_status sv = gardo_config_validate(guard.cfg);
        if (sv != GARDO_OK) return report_failure(sv);
        return kExitOk;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GARDO lab: gated/adaptive KL regularization with diversity-aware "
                 "advantage shaping for diffusion RL on 2D mixture worlds"};
    app.require_subcommand(1);

    CommonOpts pretrain_opts, finetune_opts, eval_opts, oracle_opts;

    auto* cmd_pretrain = app.add_subcommand("pretrain", "pretrain the diffusion model");
    pretrain_opts.attach(cmd_pretrain);

    auto* cmd_finetune = app.add_subcommand("finetune", "run RL fine-tuning");
    finetune_opts.attach(cmd_finetune);

    auto* cmd_eval = app.add_subcommand("eval", "evaluate a checkpoint");
    std::string eval_ckpt, eval_ref, eval_out;
    eval_opts.attach(cmd_eval);
    cmd_eval->add_option("--checkpoint", eval_ckpt, "checkpoint to evaluate")->required();
    cmd_eval->add_option("--reference", eval_ref, "reference checkpoint for the hacking gap");
    cmd_eval->add_option("--out", eval_out, "write the one-row report CSV here");

    auto* cmd_oracle = app.add_subcommand("oracle", "verify the closed-form optimum on a grid");
    double oracle_beta = 0.04;
    int oracle_pairs = 1000;
    int oracle_grid = 201;
    oracle_opts.attach(cmd_oracle);
    cmd_oracle->add_option("--beta", oracle_beta, "KL strength (default 0.04)");
    cmd_oracle->add_option("--pairs", oracle_pairs, "random cell pairs (default 1000)");
    cmd_oracle->add_option("--grid", oracle_grid, "grid resolution per side (default 201)");

    auto* cmd_plot = app.add_subcommand("plot", "render SVG figures for a run");
    std::string plot_run_dir, plot_out;
    cmd_plot->add_option("--run", plot_run_dir, "run directory")->required();
    cmd_plot->add_option("--out", plot_out, "output directory (default: the run directory)");

    app.add_subcommand("presets", "list registered world presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (cmd_pretrain->parsed()) {
        ConfigGuard guard;
        if (int rc = pretrain_opts.build(guard)) return rc;
        char run_dir[4096];
        const gardo_status s = gardo_pretrain(guard.cfg, run_dir, sizeof(run_dir));
        if (s != GARDO_OK) return report_failure(s);
        std::printf("pretrain done: %s\n", run_dir);
        return kExitOk;
    }

    if (cmd_finetune->parsed()) {
        ConfigGuard guard;
        if (int rc = finetune_opts.build(guard)) return rc;
        char run_dir[4096];
        const gardo_status s = gardo_finetune(guard.cfg, run_dir, sizeof(run_dir));
        if (s != GARDO_OK) return report_failure(s);
        std::printf("finetune done: %s\n", run_dir);
        return kExitOk;
    }

    if (cmd_eval->parsed()) {
        ConfigGuard guard;
        if (int rc = eval_opts.build(guard)) return rc;
        gardo_eval_report rep{};
        const gardo_status s =
            gardo_eval(guard.cfg, eval_ckpt.c_str(), eval_ref.empty() ? nullptr : eval_ref.c_str(),
                       eval_out.empty() ? nullptr : eval_out.c_str(), &rep);
        if (s != GARDO_OK) return report_failure(s);
        std::printf("mean_proxy=%.6f mean_true=%.6f diversity=%.6f covered=%d", rep.mean_proxy,
                    rep.mean_true, rep.diversity, rep.covered_modes);
        if (rep.hacked >= 0)
            std::printf(" hacked=%s gap=%.6f", rep.hacked == 1 ? "true" : "false", rep.gap);
        std::printf(" samples=%ld\n", rep.samples);
        return kExitOk;
    }

    if (cmd_oracle->parsed()) {
        ConfigGuard guard;
        if (int rc = oracle_opts.build(guard)) return rc;
        double max_rel_err = 0.0;
        const gardo_status s =
            gardo_oracle(guard.cfg, oracle_beta, oracle_pairs, oracle_grid, &max_rel_err);
        if (s != GARDO_OK) return report_failure(s);
        std::printf("max_rel_err=%.3e (beta=%g, pairs=%d, grid=%d)\n", max_rel_err, oracle_beta,
                    oracle_pairs, oracle_grid);
        return max_rel_err < 1e-6 ? kExitOk : kExitRuntime;
    }

    if (cmd_plot->parsed()) {
        const gardo_status s =
            gardo_plot(plot_run_dir.c_str(), plot_out.empty() ? nullptr : plot_out.c_str());
        if (s != GARDO_OK) return report_failure(s);
        std::printf("plots written to %s\n", plot_out.empty() ? plot_run_dir.c_str() : plot_out.c_str());
        return kExitOk;
    }

    // presets
    size_t needed = 0;
    gardo_presets(nullptr, 0, &needed);
    std::string buf(needed, '\0');
    const gardo_status s = gardo_presets(buf.data(), buf.size(), nullptr);
    if (s != GARDO_OK) return report_failure(s);
    std::fputs(buf.c_str(), stdout);
    return kExitOk;
}

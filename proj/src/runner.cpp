#include "runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "checkpoint.hpp"
#include "errors.hpp"
#include "presets.hpp"
#include "svg.hpp"

namespace gardo {

namespace {

namespace fs = std::filesystem;

std::string checkpoint_name(long iteration) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "checkpoint_iter_%06ld.ckpt", iteration);
    return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw RuntimeError("cannot write " + path);
    f << text;
}

NoiseSchedule schedule_from_config(const TrainConfig& cfg) {
    return make_linear_schedule(static_cast<std::size_t>(cfg.timesteps), cfg.beta_min,
                                cfg.beta_max);
}

struct EvalSnapshot {
    double mean_proxy = 0.0;
    double mean_true = 0.0;
    double diversity = 0.0;
    int coverage = 0;
    std::vector<Vec2> samples;
};

EvalSnapshot eval_policy(const MlpParams& params, const NoiseSchedule& sched,
                         const HackingWorld& world, const GaussianMixture& mixture,
                         const FeatureMap& fmap, long n, Rng rng) {
    EvalSnapshot snap;
    snap.samples.reserve(static_cast<std::size_t>(n));
    double proxy_sum = 0.0, true_sum = 0.0;
    for (long i = 0; i < n; ++i) {
        Rng traj_rng = rng.derive(static_cast<uint64_t>(i) + 1);
        const auto [zx, zy] = traj_rng.normal2();
        const Trajectory traj = sample_trajectory(params, sched, {zx, zy}, traj_rng);
        snap.samples.push_back(traj.x0());
        proxy_sum += evaluate(world.proxy_reward, traj.x0());
        true_sum += evaluate(world.true_reward, traj.x0());
    }
    snap.mean_proxy = proxy_sum / static_cast<double>(n);
    snap.mean_true = true_sum / static_cast<double>(n);
    snap.diversity = diversity_metric(snap.samples, fmap);
    snap.coverage = mode_coverage(snap.samples, mixture).covered;
    return snap;
}

}  // namespace

HackingWorld resolve_rewards(const TrainConfig& cfg) {
    HackingWorld world = make_hacking_world(cfg.preset);
    if (!cfg.reward_true_override.empty()) {
        world.true_reward.bumps = cfg.reward_true_override;
        world.true_reward.baseline = 0.0;
    }
    if (!cfg.reward_proxy_override.empty()) {
        world.proxy_reward.bumps = cfg.reward_proxy_override;
        world.proxy_reward.baseline = 0.0;
    }
    validate_reward(world.true_reward);
    validate_reward(world.proxy_reward);
    return world;
}

std::string default_pretrain_checkpoint(const std::string& preset_name) {
    const WorldPreset& preset = get_preset(preset_name);
    return (fs::path(run_root()) / ("pretrain-" + preset.mixture_id) / "checkpoint_final.ckpt")
        .string();
}

PretrainRunResult pretrain_run(const TrainConfig& cfg) {
    validate_config(cfg);
    const WorldPreset& preset = get_preset(cfg.preset);
    const NoiseSchedule sched = schedule_from_config(cfg);

    PretrainConfig pc;
    pc.steps = cfg.pretrain_steps;
    pc.batch = static_cast<std::size_t>(cfg.pretrain_batch);
    pc.lr = cfg.pretrain_lr;
    pc.hidden = static_cast<std::size_t>(cfg.hidden);
    pc.t_embed_dim = static_cast<std::size_t>(cfg.t_embed);

    const PretrainResult result = pretrain(preset.mixture, sched, pc, Rng(cfg.seed));

    PretrainRunResult out;
    const std::string name =
        cfg.run_name.empty() ? "pretrain-" + preset.mixture_id : cfg.run_name;
    out.run_dir = init_run_dir(name);
    out.final_loss = result.final_loss;
    out.checkpoint_path = out.run_dir + "/checkpoint_final.ckpt";

    write_text_file(out.run_dir + "/resolved.cfg", serialize_config(cfg));
    write_text_file(out.run_dir + "/pretrain_loss.txt", format_double(result.final_loss) + "\n");
    save_checkpoint({preset.mixture_id, sched.betas, result.params}, out.checkpoint_path);
    return out;
}

FinetuneRunResult finetune_run(const TrainConfig& cfg) {
    validate_config(cfg);
    const WorldPreset& preset = get_preset(cfg.preset);
    const HackingWorld world = resolve_rewards(cfg);
    const FeatureMap fmap = cfg.feature_map();

    const std::string ckpt_path =
        cfg.pretrain_ckpt.empty() ? default_pretrain_checkpoint(cfg.preset) : cfg.pretrain_ckpt;
    if (!fs::exists(ckpt_path))
        throw UsageError("missing pretrain checkpoint " + ckpt_path +
                         " (run the pretrain subcommand for this preset first)");
    const Checkpoint ckpt = load_checkpoint(ckpt_path);
    if (static_cast<long>(ckpt.betas.size()) != cfg.timesteps)
        throw UsageError("checkpoint schedule has T=" + std::to_string(ckpt.betas.size()) +
                         " but config asks timesteps=" + std::to_string(cfg.timesteps));
    const NoiseSchedule sched = make_schedule(ckpt.betas);

    MlpParams params = ckpt.params;
    AdamState adam = make_adam(params, cfg.lr);

    GardoState state;
    state.k = cfg.k0;
    state.window_capacity = static_cast<std::size_t>(cfg.window);
    state.max_steps_between_resets = cfg.reset_interval;
    state.beta = cfg.beta;
    state.eps_clip = cfg.eps_clip;
    state.eps_kl = cfg.eps_kl;
    state.reference = params;

    const bool gating = cfg.gating_enabled();
    const bool global_kl = cfg.global_kl_enabled();
    const bool shaping = cfg.shaping_enabled();
    const bool use_std = cfg.std_enabled();
    const std::size_t g = static_cast<std::size_t>(cfg.group_size);

    FinetuneRunResult out;
    const std::string name = cfg.run_name.empty()
                                 ? cfg.preset + "-" + method_name(cfg.method) + "-s" +
                                       std::to_string(cfg.seed)
                                 : cfg.run_name;
    out.run_dir = init_run_dir(name);
    write_text_file(out.run_dir + "/resolved.cfg", serialize_config(cfg));
    MetricsWriter writer(out.run_dir);

    Rng run_rng(cfg.seed);
    std::vector<Vec2> final_samples;

    for (long iter = 1; iter <= cfg.iterations; ++iter) {
        const auto t_start = std::chrono::steady_clock::now();
        const MlpParams old_policy = params;

        GroupRollout group;
        group.trajectories = rollout_group(old_policy, sched, g, /*shared_noise=*/true,
                                           run_rng.derive(stream::rollout).derive(
                                               static_cast<uint64_t>(iter)));

        std::vector<Vec2> x0s(g);
        for (std::size_t i = 0; i < g; ++i) x0s[i] = group.trajectories[i].x0();

        group.proxy_rewards.resize(g);
        for (std::size_t i = 0; i < g; ++i)
            group.proxy_rewards[i] = evaluate(world.proxy_reward, x0s[i]);

        std::vector<std::vector<double>> aux_rewards(world.auxiliaries.size(),
                                                     std::vector<double>(g));
        for (std::size_t n = 0; n < world.auxiliaries.size(); ++n)
            for (std::size_t i = 0; i < g; ++i)
                aux_rewards[n][i] = evaluate(world.auxiliaries[n], x0s[i]);

        group.advantages = compute_advantages(group.proxy_rewards, use_std);
        if (shaping) {
            group.diversity = diversity_scores(x0s, fmap);
            group.shaped_advantages = shape_advantages(group.advantages, group.diversity);
        } else {
            group.diversity.assign(g, 0.0);
            group.shaped_advantages = group.advantages;
        }

        group.uncertainty = estimate_uncertainty(group.proxy_rewards, aux_rewards);
        double mean_u = 0.0;
        for (double u : group.uncertainty) mean_u += u;
        mean_u /= static_cast<double>(g);

        if (gating)
            group.gate_mask = gate_mask(group.uncertainty, state.k);
        else if (global_kl)
            group.gate_mask.assign(g, 1);
        else
            group.gate_mask.assign(g, 0);

        const bool apply_kl = gating || global_kl;
        const LossResult loss = grpo_loss(group, params, old_policy, sched, state, apply_kl);

        MlpGrad descent = loss.grad;
        descent.for_each_array([](std::vector<double>& v) {
            for (double& x : v) x = -x;
        });
        adam_step(params, descent, adam);

        bool reset_fired = false;
        if (gating) {
            adapt_k(state, mean_u);
            reset_fired = maybe_reset_reference(state, params, loss.kl_loss);
        }

        std::size_t gated_count = 0;
        for (uint8_t b : group.gate_mask) gated_count += b;

        for (std::size_t i = 0; i < g; ++i) {
            out.rollout_uncertainty.push_back(group.uncertainty[i]);
            out.rollout_x0.push_back(x0s[i]);
        }

        const EvalSnapshot snap =
            eval_policy(params, sched, world, preset.mixture, fmap, cfg.eval_samples,
                        run_rng.derive(stream::eval).derive(static_cast<uint64_t>(iter)));

        MetricsRecord rec;
        rec.iteration = iter;
        rec.mean_proxy = snap.mean_proxy;
        rec.mean_true = snap.mean_true;
        rec.diversity = snap.diversity;
        rec.k = gating ? state.k : 0.0;
        rec.gated_fraction = static_cast<double>(gated_count) / static_cast<double>(g);
        rec.kl_loss = loss.kl_loss;
        rec.reset_fired = reset_fired;
        rec.coverage = snap.coverage;
        rec.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t_start)
                          .count();
        writer.write(rec);
        out.metrics.push_back(rec);

        if (iter % cfg.ckpt_every == 0)
            save_checkpoint({preset.mixture_id, sched.betas, params},
                            out.run_dir + "/" + checkpoint_name(iter));
        if (iter == cfg.iterations) final_samples = snap.samples;
    }

    save_checkpoint({preset.mixture_id, sched.betas, params},
                    out.run_dir + "/checkpoint_final.ckpt");
    write_samples_csv(out.run_dir + "/samples.csv", final_samples);
    out.final_params = std::move(params);
    return out;
}

EvalReport eval_run(const TrainConfig& cfg, const std::string& checkpoint_path,
                    const std::string& reference_ckpt, const std::string& out_csv) {
    validate_config(cfg);
    const WorldPreset& preset = get_preset(cfg.preset);
    const HackingWorld world = resolve_rewards(cfg);
    const FeatureMap fmap = cfg.feature_map();

    if (!fs::exists(checkpoint_path))
        throw UsageError("eval: checkpoint not found: " + checkpoint_path);
    const Checkpoint ckpt = load_checkpoint(checkpoint_path);
    const NoiseSchedule sched = make_schedule(ckpt.betas);

    EvalReport report;
    report.preset = cfg.preset;
    report.samples = cfg.eval_samples;
    report.seed = cfg.seed;

    Rng rng = Rng(cfg.seed).derive(stream::eval);
    std::vector<Vec2> samples;
    std::vector<double> proxy_vals, true_vals;
    samples.reserve(static_cast<std::size_t>(cfg.eval_samples));
    for (long i = 0; i < cfg.eval_samples; ++i) {
        Rng traj_rng = rng.derive(static_cast<uint64_t>(i) + 1);
        const auto [zx, zy] = traj_rng.normal2();
        const Trajectory traj = sample_trajectory(ckpt.params, sched, {zx, zy}, traj_rng);
        samples.push_back(traj.x0());
        proxy_vals.push_back(evaluate(world.proxy_reward, traj.x0()));
        true_vals.push_back(evaluate(world.true_reward, traj.x0()));
    }
    const JEstimate proxy_est = mean_and_stderr(proxy_vals);
    const JEstimate true_est = mean_and_stderr(true_vals);
    report.mean_proxy = proxy_est.mean;
    report.se_proxy = proxy_est.stderr_;
    report.mean_true = true_est.mean;
    report.se_true = true_est.stderr_;
    report.diversity = diversity_metric(samples, fmap);
    report.coverage = mode_coverage(samples, preset.mixture);

    std::string ref_path = reference_ckpt;
    if (ref_path.empty()) {
        const std::string fallback = default_pretrain_checkpoint(cfg.preset);
        if (fs::exists(fallback)) ref_path = fallback;
    }
    if (!ref_path.empty()) {
        const Checkpoint ref = load_checkpoint(ref_path);
        const JEstimate ref_true =
            estimate_j(ref.params, make_schedule(ref.betas), world.true_reward, cfg.eval_samples,
                       Rng(cfg.seed).derive(stream::eval).derive(0));
        const HackingVerdict verdict = hacking_gap(true_est, ref_true);
        report.has_reference = true;
        report.hacked = verdict.hacked;
        report.gap = verdict.gap;
    }

    if (!out_csv.empty()) {
        std::ofstream f(out_csv, std::ios::trunc);
        if (!f) throw RuntimeError("eval: cannot write " + out_csv);
        f << eval_report_csv_header() << eval_report_csv_row(report);
    }
    return report;
}

double oracle_run(const TrainConfig& cfg, double beta, int pairs, std::size_t grid_n) {
    validate_config(cfg);
    if (!(beta > 0.0)) throw UsageError("oracle: beta must be positive");
    const WorldPreset& preset = get_preset(cfg.preset);
    const HackingWorld world = resolve_rewards(cfg);
    const GridDensity ref = grid_from_mixture(preset.mixture, grid_n);
    const GridSolution sol = optimal_grid_solution(ref, world.proxy_reward, beta);
    return verify_proposition1(sol.density, ref, world.proxy_reward, beta, pairs,
                               Rng(cfg.seed).derive(stream::oracle));
}

std::vector<std::string> plot_run(const std::string& run_dir, const std::string& out_dir) {
    const std::string cfg_path = run_dir + "/resolved.cfg";
    if (!fs::exists(cfg_path)) throw UsageError("plot: no resolved.cfg in " + run_dir);
    const TrainConfig cfg = load_config(cfg_path);
    const HackingWorld world = resolve_rewards(cfg);

    const std::string metrics_path = run_dir + "/metrics.csv";
    const std::string samples_path = run_dir + "/samples.csv";
    if (!fs::exists(metrics_path)) throw RuntimeError("plot: no metrics.csv in " + run_dir);
    std::vector<Vec2> samples;
    if (fs::exists(samples_path)) samples = read_samples_csv(samples_path);

    const std::string target = out_dir.empty() ? run_dir : out_dir;
    fs::create_directories(target);
    return render_plots(metrics_path, samples_path, &world.proxy_reward, target);
}

std::string eval_report_csv_header() {
    return "# gardo-eval-v1: preset,seed,samples,mean_proxy,se_proxy,mean_true,se_true,"
           "diversity,covered,unassigned_mass,hacked,gap,per_mode_mass\n";
}

std::string eval_report_csv_row(const EvalReport& r) {
    std::ostringstream os;
    os << r.preset << ',' << r.seed << ',' << r.samples << ',' << format_double(r.mean_proxy)
       << ',' << format_double(r.se_proxy) << ',' << format_double(r.mean_true) << ','
       << format_double(r.se_true) << ',' << format_double(r.diversity) << ','
       << r.coverage.covered << ',' << format_double(r.coverage.unassigned_mass) << ','
       << (r.has_reference ? (r.hacked ? 1 : 0) : -1) << ',' << format_double(r.gap) << ',';
    for (std::size_t i = 0; i < r.coverage.per_mode_mass.size(); ++i) {
        if (i) os << ';';
        os << format_double(r.coverage.per_mode_mass[i]);
    }
    os << '\n';
    return os.str();
}

}  // namespace gardo

#include "gardo/gardo.h"

#include <cstring>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "presets.hpp"
#include "runner.hpp"

namespace {

thread_local std::string t_last_error;

struct ConfigHandle {
    gardo::TrainConfig cfg;
};

gardo::TrainConfig& unwrap(gardo_config* h) { return reinterpret_cast<ConfigHandle*>(h)->cfg; }
const gardo::TrainConfig& unwrap(const gardo_config* h) {
    return reinterpret_cast<const ConfigHandle*>(h)->cfg;
}

void copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
    if (needed != nullptr) *needed = s.size() + 1;
    if (buf == nullptr || cap == 0) return;
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

template <typename F>
gardo_status guarded(F&& f) {
    try {
        f();
        t_last_error.clear();
        return GARDO_OK;
    } catch (const gardo::UsageError& e) {
        t_last_error = e.what();
        return GARDO_ERR_USAGE;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return GARDO_ERR_RUNTIME;
    }
}

}  // namespace

extern "C" {

const char* gardo_version(void) { return "gardo 1.0.0"; }

const char* gardo_last_error(void) { return t_last_error.c_str(); }

gardo_status gardo_config_create(gardo_config** out) {
    return guarded([&] {
        if (out == nullptr) throw gardo::UsageError("config_create: out is NULL");
        *out = reinterpret_cast<gardo_config*>(new ConfigHandle{});
    });
}

gardo_status gardo_config_load(const char* path, gardo_config** out) {
    return guarded([&] {
        if (path == nullptr || out == nullptr)
            throw gardo::UsageError("config_load: NULL argument");
        auto* handle = new ConfigHandle{};
        try {
            handle->cfg = gardo::load_config(path);
        } catch (...) {
            delete handle;
            throw;
        }
        *out = reinterpret_cast<gardo_config*>(handle);
    });
}

gardo_status gardo_config_set(gardo_config* cfg, const char* key, const char* value) {
    return guarded([&] {
        if (cfg == nullptr || key == nullptr || value == nullptr)
            throw gardo::UsageError("config_set: NULL argument");
        gardo::apply_override(unwrap(cfg), key, value);
    });
}

gardo_status gardo_config_validate(const gardo_config* cfg) {
    return guarded([&] {
        if (cfg == nullptr) throw gardo::UsageError("config_validate: NULL config");
        gardo::validate_config(unwrap(cfg));
    });
}

gardo_status gardo_config_serialize(const gardo_config* cfg, char* buf, size_t cap,
                                    size_t* needed) {
    return guarded([&] {
        if (cfg == nullptr) throw gardo::UsageError("config_serialize: NULL config");
        copy_out(gardo::serialize_config(unwrap(cfg)), buf, cap, needed);
    });
}

void gardo_config_free(gardo_config* cfg) { delete reinterpret_cast<ConfigHandle*>(cfg); }

gardo_status gardo_pretrain(const gardo_config* cfg, char* run_dir_out, size_t cap) {
    return guarded([&] {
        if (cfg == nullptr) throw gardo::UsageError("pretrain: NULL config");
        const gardo::PretrainRunResult res = gardo::pretrain_run(unwrap(cfg));
        copy_out(res.run_dir, run_dir_out, cap, nullptr);
    });
}

gardo_status gardo_finetune(const gardo_config* cfg, char* run_dir_out, size_t cap) {
    return guarded([&] {
        if (cfg == nullptr) throw gardo::UsageError("finetune: NULL config");
        const gardo::FinetuneRunResult res = gardo::finetune_run(unwrap(cfg));
        copy_out(res.run_dir, run_dir_out, cap, nullptr);
    });
}

gardo_status gardo_eval(const gardo_config* cfg, const char* checkpoint,
                        const char* reference_ckpt, const char* csv_path,
                        gardo_eval_report* out) {
    return guarded([&] {
        if (cfg == nullptr || checkpoint == nullptr)
            throw gardo::UsageError("eval: NULL argument");
        const std::string ref = reference_ckpt != nullptr ? reference_ckpt : "";
        const std::string csv = csv_path != nullptr ? csv_path : "";
        const gardo::EvalReport rep = gardo::eval_run(unwrap(cfg), checkpoint, ref, csv);
        if (out != nullptr) {
            out->mean_proxy = rep.mean_proxy;
            out->se_proxy = rep.se_proxy;
            out->mean_true = rep.mean_true;
            out->se_true = rep.se_true;
            out->diversity = rep.diversity;
            out->covered_modes = rep.coverage.covered;
            out->hacked = rep.has_reference ? (rep.hacked ? 1 : 0) : -1;
            out->gap = rep.gap;
            out->samples = rep.samples;
        }
    });
}

gardo_status gardo_oracle(const gardo_config* cfg, double beta, int pairs, int grid_n,
                          double* max_rel_err_out) {
    return guarded([&] {
        if (cfg == nullptr || max_rel_err_out == nullptr)
            throw gardo::UsageError("oracle: NULL argument");
        if (pairs <= 0 || grid_n <= 1) throw gardo::UsageError("oracle: bad pairs/grid_n");
        *max_rel_err_out =
            gardo::oracle_run(unwrap(cfg), beta, pairs, static_cast<std::size_t>(grid_n));
    });
}

gardo_status gardo_plot(const char* run_dir, const char* out_dir) {
    return guarded([&] {
        if (run_dir == nullptr) throw gardo::UsageError("plot: NULL run_dir");
        gardo::plot_run(run_dir, out_dir != nullptr ? out_dir : "");
    });
}

gardo_status gardo_presets(char* buf, size_t cap, size_t* needed) {
    return guarded([&] {
        std::string out;
        for (const std::string& name : gardo::preset_names())
            out += name + ": " + gardo::get_preset(name).description + "\n";
        copy_out(out, buf, cap, needed);
    });
}

}  // extern "C"

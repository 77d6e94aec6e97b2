#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "vec2.hpp"

namespace gardo {

// One metrics row per training iteration. wall_ms is measured per
// iteration but written to a separate timing.csv so metrics.csv stays
// byte-identical across reruns of the same seed.
struct MetricsRecord {
    long iteration = 0;
    double mean_proxy = 0.0;
    double mean_true = 0.0;
    double diversity = 0.0;
    double k = 0.0;
    double gated_fraction = 0.0;
    double kl_loss = 0.0;
    bool reset_fired = false;
    int coverage = 0;
    double wall_ms = 0.0;
};

// Output root: $GARDO_RUN_ROOT if set, else ./runs.
std::string run_root();

// Creates <run_root>/<name> (parents included) and returns its path.
std::string init_run_dir(const std::string& name);

// Append-only CSV writer; header goes out once, every row is flushed.
class MetricsWriter {
public:
    explicit MetricsWriter(const std::string& run_dir);
    ~MetricsWriter();
    MetricsWriter(const MetricsWriter&) = delete;
    MetricsWriter& operator=(const MetricsWriter&) = delete;

    void write(const MetricsRecord& record);
    const std::string& metrics_path() const { return metrics_path_; }

private:
    std::string metrics_path_;
    std::string timing_path_;
    std::FILE* metrics_ = nullptr;
    std::FILE* timing_ = nullptr;
};

std::vector<MetricsRecord> read_metrics(const std::string& metrics_path);

void write_samples_csv(const std::string& path, const std::vector<Vec2>& samples);
std::vector<Vec2> read_samples_csv(const std::string& path);

std::string format_double(double v);  // %.17g, round-trip exact

}  // namespace gardo

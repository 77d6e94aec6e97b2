#include "run_io.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace gardo {

namespace {

// Single header line: schema version, column names and the note that
// gating columns stay 0 for methods without a KL gate.
constexpr const char* kMetricsHeader =
    "# gardo-metrics-v1: iteration,mean_proxy,mean_true,diversity,k,gated_fraction,"
    "kl_loss,reset,coverage (gating columns are 0 for methods without a KL gate)\n";

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string run_root() {
    const char* env = std::getenv("GARDO_RUN_ROOT");
    if (env != nullptr && env[0] != '\0') return env;
    return "runs";
}

std::string init_run_dir(const std::string& name) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(run_root()) / name;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw RuntimeError("cannot create run directory " + dir.string() + ": " + ec.message());
    return dir.string();
}

MetricsWriter::MetricsWriter(const std::string& run_dir) {
    metrics_path_ = run_dir + "/metrics.csv";
    timing_path_ = run_dir + "/timing.csv";
    metrics_ = std::fopen(metrics_path_.c_str(), "w");
    timing_ = std::fopen(timing_path_.c_str(), "w");
    if (metrics_ == nullptr || timing_ == nullptr)
        throw RuntimeError("cannot open metrics files in " + run_dir);
    std::fputs(kMetricsHeader, metrics_);
    std::fputs("# iteration,wall_ms\n", timing_);
    std::fflush(metrics_);
    std::fflush(timing_);
}

MetricsWriter::~MetricsWriter() {
    if (metrics_ != nullptr) std::fclose(metrics_);
    if (timing_ != nullptr) std::fclose(timing_);
}

void MetricsWriter::write(const MetricsRecord& r) {
    std::ostringstream row;
    row << r.iteration << ',' << format_double(r.mean_proxy) << ',' << format_double(r.mean_true)
        << ',' << format_double(r.diversity) << ',' << format_double(r.k) << ','
        << format_double(r.gated_fraction) << ',' << format_double(r.kl_loss) << ','
        << (r.reset_fired ? 1 : 0) << ',' << r.coverage << '\n';
    if (std::fputs(row.str().c_str(), metrics_) == EOF || std::fflush(metrics_) != 0)
        throw RuntimeError("metrics write failed; partial data in " + metrics_path_);
    std::fprintf(timing_, "%ld,%s\n", r.iteration, format_double(r.wall_ms).c_str());
    std::fflush(timing_);
}

std::vector<MetricsRecord> read_metrics(const std::string& metrics_path) {
    std::ifstream f(metrics_path);
    if (!f) throw UsageError("cannot open metrics file: " + metrics_path);
    std::vector<MetricsRecord> records;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 9)
            throw RuntimeError("malformed metrics row in " + metrics_path + ": " + line);
        MetricsRecord r;
        r.iteration = std::stol(fields[0]);
        r.mean_proxy = std::stod(fields[1]);
        r.mean_true = std::stod(fields[2]);
        r.diversity = std::stod(fields[3]);
        r.k = std::stod(fields[4]);
        r.gated_fraction = std::stod(fields[5]);
        r.kl_loss = std::stod(fields[6]);
        r.reset_fired = fields[7] == "1";
        r.coverage = std::stoi(fields[8]);
        records.push_back(r);
    }
    return records;
}

void write_samples_csv(const std::string& path, const std::vector<Vec2>& samples) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw RuntimeError("cannot open samples file: " + path);
    f << "# x,y\n";
    for (const auto& s : samples) f << format_double(s.x) << ',' << format_double(s.y) << '\n';
    if (!f) throw RuntimeError("samples write failed: " + path);
}

std::vector<Vec2> read_samples_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open samples file: " + path);
    std::vector<Vec2> samples;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw RuntimeError("malformed samples row: " + line);
        samples.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    }
    return samples;
}

}  // namespace gardo

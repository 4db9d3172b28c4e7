#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace thermalab {

// Wall-clock stage timing in seconds.
struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct ArtifactEntry {
    std::string name;  // logical name, e.g. "scaling_csv"
    std::string path;  // relative to the run directory
};

// One structured record per CLI run: what ran, from which config, with which
// seeds, how long each stage took, the headline metrics, and which files the
// run produced. save() refuses to index artifacts that are missing or empty.
struct RunReport {
    std::string command;
    std::string config_hash;
    std::uint64_t master_seed = 0;
    int threads = 1;
    std::vector<StageTiming> timings;
    nlohmann::json config;
    nlohmann::json metrics = nlohmann::json::object();
    nlohmann::json units = nlohmann::json::object();  // metric name -> unit
    nlohmann::json diagnostics = nlohmann::json::object();
    std::vector<ArtifactEntry> artifacts;

    void add_timing(const std::string& stage, double seconds);
    void add_artifact(const std::string& name, const std::string& relative_path);
    // Records a metric together with its unit annotation ("energy", "nats",
    // "bits", "dimensionless", ...).
    void add_metric(const std::string& name, double value, const std::string& unit);

    nlohmann::json to_json() const;
    // Writes <run_dir>/report.json; validates artifact presence first.
    std::string save(const std::string& run_dir) const;
};

// Minimal JSON-schema checker covering the subset used by the run-report
// schema: "type", "required", "properties", "items". Returns a list of
// human-readable violations; empty means valid.
std::vector<std::string> schema_violations(const nlohmann::json& schema, const nlohmann::json& doc);

// Stopwatch helper for stage timings.
class Stopwatch {
  public:
    Stopwatch();
    double elapsed() const;  // seconds since construction or last restart
    double lap();            // elapsed, then restart
  private:
    std::int64_t start_ns_;
};

}  // namespace thermalab

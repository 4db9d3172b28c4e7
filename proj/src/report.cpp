#include "thermalab/report.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace thermalab {

namespace fs = std::filesystem;
using nlohmann::json;

void RunReport::add_timing(const std::string& stage, double seconds) {
    timings.push_back({stage, seconds});
}

void RunReport::add_artifact(const std::string& name, const std::string& relative_path) {
    artifacts.push_back({name, relative_path});
}

void RunReport::add_metric(const std::string& name, double value, const std::string& unit) {
    metrics[name] = value;
    units[name] = unit;
}

json RunReport::to_json() const {
    json j;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["master_seed"] = master_seed;
    j["threads"] = threads;
    j["timings"] = json::array();
    for (const auto& t : timings) {
        json jt;
        jt["stage"] = t.stage;
        jt["seconds"] = t.seconds;
        j["timings"].push_back(jt);
    }
    j["config"] = config;
    j["metrics"] = metrics;
    j["units"] = units;
    j["diagnostics"] = diagnostics;
    j["artifacts"] = json::array();
    for (const auto& a : artifacts) {
        json ja;
        ja["name"] = a.name;
        ja["path"] = a.path;
        j["artifacts"].push_back(ja);
    }
    return j;
}

std::string RunReport::save(const std::string& run_dir) const {
    for (const auto& a : artifacts) {
        const fs::path p = fs::path(run_dir) / a.path;
        std::error_code ec;
        const auto size = fs::file_size(p, ec);
        if (ec) throw std::runtime_error("artifact '" + a.name + "' missing at " + p.string());
        if (size == 0) throw std::runtime_error("artifact '" + a.name + "' is empty at " + p.string());
    }
    const fs::path out = fs::path(run_dir) / "report.json";
    std::ofstream f(out, std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write report to " + out.string());
    f << to_json().dump(2) << '\n';
    return out.string();
}

namespace {

std::string json_type_name(const json& v) {
    if (v.is_object()) return "object";
    if (v.is_array()) return "array";
    if (v.is_string()) return "string";
    if (v.is_boolean()) return "boolean";
    if (v.is_number_integer() || v.is_number_unsigned()) return "integer";
    if (v.is_number()) return "number";
    return "null";
}

bool type_matches(const std::string& want, const json& v) {
    if (want == "number") return v.is_number();
    if (want == "integer") return v.is_number_integer() || v.is_number_unsigned();
    return json_type_name(v) == want;
}

void validate_node(const json& schema, const json& doc, const std::string& where,
                   std::vector<std::string>& out) {
    if (schema.contains("type")) {
        const std::string want = schema.at("type").get<std::string>();
        if (!type_matches(want, doc)) {
            out.push_back(where + ": expected " + want + ", got " + json_type_name(doc));
            return;
        }
    }
    if (schema.contains("required") && doc.is_object()) {
        for (const auto& key : schema.at("required"))
            if (!doc.contains(key.get<std::string>()))
                out.push_back(where + ": missing required key '" + key.get<std::string>() + "'");
    }
    if (schema.contains("properties") && doc.is_object()) {
        for (const auto& [key, sub] : schema.at("properties").items())
            if (doc.contains(key)) validate_node(sub, doc.at(key), where + "." + key, out);
    }
    if (schema.contains("items") && doc.is_array()) {
        const json& sub = schema.at("items");
        for (std::size_t i = 0; i < doc.size(); ++i)
            validate_node(sub, doc.at(i), where + "[" + std::to_string(i) + "]", out);
    }
}

}  // namespace

std::vector<std::string> schema_violations(const json& schema, const json& doc) {
    std::vector<std::string> out;
    validate_node(schema, doc, "$", out);
    return out;
}

Stopwatch::Stopwatch() { start_ns_ = 0; start_ns_ = std::chrono::steady_clock::now().time_since_epoch().count(); }

double Stopwatch::elapsed() const {
    const auto now = std::chrono::steady_clock::now().time_since_epoch().count();
    return static_cast<double>(now - start_ns_) * 1e-9;
}

double Stopwatch::lap() {
    const double e = elapsed();
    start_ns_ = std::chrono::steady_clock::now().time_since_epoch().count();
    return e;
}

}  // namespace thermalab

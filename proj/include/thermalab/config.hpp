#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "thermalab/hamiltonian.hpp"
#include "thermalab/spectrum.hpp"

namespace thermalab {

// delta policies: a fixed energy width, a multiple of the spectral standard
// deviation, or value * N^((1 - alpha)/(D + 1) - kappa).
struct DeltaPolicy {
    enum class Mode { Absolute, SigmaRelative, NPower };
    Mode mode = Mode::SigmaRelative;
    double value = 0.5;
    double alpha = 0.5;
    double kappa = 0.0;
};

struct BetaPolicy {
    enum class Mode { Explicit, SolveFromState };
    Mode mode = Mode::SolveFromState;
    double value = 0.0;
};

// Uniform Bloch product state.
struct StateSpec {
    double theta = 1.5707963267948966;  // pi/2
    double phi = 1.5707963267948966;
};

struct ObservableSpec {
    char pauli = 'z';
    int site = 0;
};

struct TimeGridSpec {
    std::string kind = "linspace";  // or "logspace"
    double t0 = 0.0;
    double t1 = 10.0;
    int n = 50;
};

struct XiPolicy {
    enum class Mode { Manual, Fit };
    Mode mode = Mode::Manual;
    double value = 1.0;
    char probe = 'z';
    std::vector<int> distances = {1, 2, 3};
};

struct ConditionSpec {
    double epsilon = 0.1;
    int l = 1;
    double z = 1.0;
};

struct SweepSpec {
    std::string mode = "thermalization";  // or "gibbs_invariance"
    std::vector<int> sizes = {6, 8, 10};
};

struct ExperimentConfig {
    ModelSpec model;
    StateSpec state;
    DeltaPolicy delta;
    int delta_big_multiple = 2;
    BetaPolicy beta;
    ObservableSpec observable;
    std::vector<int> l_list = {1};
    TimeGridSpec time_grid;
    int n_samples = 20;
    std::uint64_t master_seed = 1;
    int threads = 1;
    std::string out_dir = "runs/out";
    std::optional<std::string> cache_dir;
    XiPolicy xi;
    ConditionSpec condition;
    SweepSpec sweep;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Canonical JSON image of the config; nlohmann orders object keys, so the
// hash is stable under input field reordering.
nlohmann::json config_to_json(const ExperimentConfig& c);
std::string config_hash(const ExperimentConfig& c);

// Canonical image of the model alone; hashing it keys the spectrum cache.
nlohmann::json model_to_json(const ModelSpec& m);
std::string model_key(const ModelSpec& m);

double resolve_delta(const DeltaPolicy& p, const Spectrum& spec, const LatticeSpec& lattice);

}  // namespace thermalab

#include "thermalab/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "thermalab/cache.hpp"

namespace thermalab {

namespace {

using nlohmann::json;

Boundary parse_boundary(const std::string& s) {
    if (s == "open") return Boundary::Open;
    if (s == "periodic") return Boundary::Periodic;
    throw std::invalid_argument("boundary must be 'open' or 'periodic', got '" + s + "'");
}

std::string boundary_name(Boundary b) {
    return b == Boundary::Open ? "open" : "periodic";
}

ModelKind parse_model_kind(const std::string& s) {
    if (s == "mixed_field_ising") return ModelKind::MixedFieldIsing;
    if (s == "heisenberg_xxz") return ModelKind::HeisenbergXXZ;
    if (s == "custom") return ModelKind::Custom;
    throw std::invalid_argument("unknown model kind '" + s + "'");
}

std::string model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::MixedFieldIsing: return "mixed_field_ising";
        case ModelKind::HeisenbergXXZ: return "heisenberg_xxz";
        case ModelKind::Custom: return "custom";
    }
    throw std::logic_error("unreachable model kind");
}

// Re/Im pairs, row-major.
Eigen::MatrixXcd parse_complex_matrix(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix must be a non-empty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j.at(0).size());
    Eigen::MatrixXcd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& row = j.at(r);
        if (static_cast<int>(row.size()) != cols) throw std::invalid_argument("ragged matrix rows");
        for (int c = 0; c < cols; ++c) {
            const auto& cell = row.at(c);
            if (!cell.is_array() || cell.size() != 2)
                throw std::invalid_argument("matrix entries must be [re, im] pairs");
            m(r, c) = std::complex<double>(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    return m;
}

json dump_complex_matrix(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
    ExperimentConfig c;

    if (j.contains("model")) {
        const json& m = j.at("model");
        c.model.kind = parse_model_kind(get_or<std::string>(m, "kind", "mixed_field_ising"));
        if (m.contains("lattice")) {
            const json& l = m.at("lattice");
            c.model.lattice.dimension = get_or<int>(l, "dimension", 1);
            c.model.lattice.side = get_or<int>(l, "side", 2);
            c.model.lattice.local_dim = get_or<int>(l, "local_dim", 2);
            c.model.lattice.boundary = parse_boundary(get_or<std::string>(l, "boundary", "periodic"));
        }
        if (m.contains("couplings"))
            for (const auto& [name, v] : m.at("couplings").items())
                c.model.couplings[name] = v.get<double>();
        if (m.contains("custom_terms")) {
            for (const auto& t : m.at("custom_terms")) {
                CustomTerm term;
                term.region = t.at("region").get<std::vector<int>>();
                term.block = parse_complex_matrix(t.at("block"));
                c.model.custom_terms.push_back(std::move(term));
            }
        }
        c.model.max_log2_dim = get_or<int>(m, "max_log2_dim", 13);
    }
    c.model.lattice.validate();

    if (j.contains("state")) {
        c.state.theta = get_or<double>(j.at("state"), "theta", c.state.theta);
        c.state.phi = get_or<double>(j.at("state"), "phi", c.state.phi);
    }

    if (j.contains("delta")) {
        const json& d = j.at("delta");
        const std::string mode = get_or<std::string>(d, "mode", "sigma_relative");
        if (mode == "absolute") c.delta.mode = DeltaPolicy::Mode::Absolute;
        else if (mode == "sigma_relative") c.delta.mode = DeltaPolicy::Mode::SigmaRelative;
        else if (mode == "n_power") c.delta.mode = DeltaPolicy::Mode::NPower;
        else throw std::invalid_argument("unknown delta mode '" + mode + "'");
        c.delta.value = get_or<double>(d, "value", c.delta.value);
        c.delta.alpha = get_or<double>(d, "alpha", c.delta.alpha);
        c.delta.kappa = get_or<double>(d, "kappa", c.delta.kappa);
        if (c.delta.value <= 0) throw std::invalid_argument("delta value must be positive");
    }
    c.delta_big_multiple = get_or<int>(j, "delta_big_multiple", c.delta_big_multiple);
    if (c.delta_big_multiple < 1) throw std::invalid_argument("delta_big_multiple must be >= 1");

    if (j.contains("beta")) {
        const json& b = j.at("beta");
        const std::string mode = get_or<std::string>(b, "mode", "solve_from_state");
        if (mode == "explicit") c.beta.mode = BetaPolicy::Mode::Explicit;
        else if (mode == "solve_from_state") c.beta.mode = BetaPolicy::Mode::SolveFromState;
        else throw std::invalid_argument("unknown beta mode '" + mode + "'");
        c.beta.value = get_or<double>(b, "value", c.beta.value);
    }

    if (j.contains("observable")) {
        const std::string p = get_or<std::string>(j.at("observable"), "pauli", "z");
        if (p.size() != 1 || (p != "x" && p != "y" && p != "z"))
            throw std::invalid_argument("observable pauli must be one of x, y, z");
        c.observable.pauli = p[0];
        c.observable.site = get_or<int>(j.at("observable"), "site", 0);
    }

    c.l_list = get_or<std::vector<int>>(j, "l_list", c.l_list);
    if (c.l_list.empty()) throw std::invalid_argument("l_list must be non-empty");
    for (int l : c.l_list)
        if (l < 1) throw std::invalid_argument("l_list entries must be >= 1");

    if (j.contains("time_grid")) {
        const json& t = j.at("time_grid");
        c.time_grid.kind = get_or<std::string>(t, "kind", c.time_grid.kind);
        if (c.time_grid.kind != "linspace" && c.time_grid.kind != "logspace")
            throw std::invalid_argument("time_grid kind must be linspace or logspace");
        c.time_grid.t0 = get_or<double>(t, "t0", c.time_grid.t0);
        c.time_grid.t1 = get_or<double>(t, "t1", c.time_grid.t1);
        c.time_grid.n = get_or<int>(t, "n", c.time_grid.n);
        if (c.time_grid.n < 2) throw std::invalid_argument("time_grid n must be >= 2");
    }

    c.n_samples = get_or<int>(j, "n_samples", c.n_samples);
    if (c.n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    c.master_seed = get_or<std::uint64_t>(j, "master_seed", c.master_seed);
    c.threads = get_or<int>(j, "threads", c.threads);
    if (c.threads < 1) throw std::invalid_argument("threads must be >= 1");
    c.out_dir = get_or<std::string>(j, "out_dir", c.out_dir);
    if (j.contains("cache_dir")) c.cache_dir = j.at("cache_dir").get<std::string>();

    if (j.contains("xi")) {
        const json& x = j.at("xi");
        const std::string mode = get_or<std::string>(x, "mode", "manual");
        if (mode == "manual") c.xi.mode = XiPolicy::Mode::Manual;
        else if (mode == "fit") c.xi.mode = XiPolicy::Mode::Fit;
        else throw std::invalid_argument("unknown xi mode '" + mode + "'");
        c.xi.value = get_or<double>(x, "value", c.xi.value);
        const std::string p = get_or<std::string>(x, "probe", "z");
        if (p.size() != 1) throw std::invalid_argument("xi probe must be a single pauli letter");
        c.xi.probe = p[0];
        c.xi.distances = get_or<std::vector<int>>(x, "distances", c.xi.distances);
        if (c.xi.value <= 0) throw std::invalid_argument("xi value must be positive");
    }

    if (j.contains("condition")) {
        const json& k = j.at("condition");
        c.condition.epsilon = get_or<double>(k, "epsilon", c.condition.epsilon);
        c.condition.l = get_or<int>(k, "l", c.condition.l);
        c.condition.z = get_or<double>(k, "z", c.condition.z);
        if (c.condition.epsilon <= 0 || c.condition.epsilon >= 1)
            throw std::invalid_argument("condition epsilon must lie in (0, 1)");
        if (c.condition.l < 1) throw std::invalid_argument("condition l must be >= 1");
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        c.sweep.mode = get_or<std::string>(s, "mode", c.sweep.mode);
        if (c.sweep.mode != "thermalization" && c.sweep.mode != "gibbs_invariance")
            throw std::invalid_argument("sweep mode must be thermalization or gibbs_invariance");
        c.sweep.sizes = get_or<std::vector<int>>(s, "sizes", c.sweep.sizes);
        if (c.sweep.sizes.empty()) throw std::invalid_argument("sweep sizes must be non-empty");
    }

    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    return parse_config(j);
}

nlohmann::json model_to_json(const ModelSpec& m) {
    json j;
    j["kind"] = model_kind_name(m.kind);
    j["lattice"]["dimension"] = m.lattice.dimension;
    j["lattice"]["side"] = m.lattice.side;
    j["lattice"]["local_dim"] = m.lattice.local_dim;
    j["lattice"]["boundary"] = boundary_name(m.lattice.boundary);
    j["couplings"] = json::object();
    for (const auto& [name, v] : m.couplings) j["couplings"][name] = v;
    j["custom_terms"] = json::array();
    for (const auto& t : m.custom_terms) {
        json jt;
        jt["region"] = t.region;
        jt["block"] = dump_complex_matrix(t.block);
        j["custom_terms"].push_back(jt);
    }
    j["max_log2_dim"] = m.max_log2_dim;
    return j;
}

std::string model_key(const ModelSpec& m) {
    return sha256_hex(model_to_json(m).dump()).substr(0, 16);
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    json j;
    j["model"] = model_to_json(c.model);

    j["state"]["theta"] = c.state.theta;
    j["state"]["phi"] = c.state.phi;

    switch (c.delta.mode) {
        case DeltaPolicy::Mode::Absolute: j["delta"]["mode"] = "absolute"; break;
        case DeltaPolicy::Mode::SigmaRelative: j["delta"]["mode"] = "sigma_relative"; break;
        case DeltaPolicy::Mode::NPower: j["delta"]["mode"] = "n_power"; break;
    }
    j["delta"]["value"] = c.delta.value;
    j["delta"]["alpha"] = c.delta.alpha;
    j["delta"]["kappa"] = c.delta.kappa;
    j["delta_big_multiple"] = c.delta_big_multiple;

    j["beta"]["mode"] = c.beta.mode == BetaPolicy::Mode::Explicit ? "explicit" : "solve_from_state";
    j["beta"]["value"] = c.beta.value;

    j["observable"]["pauli"] = std::string(1, c.observable.pauli);
    j["observable"]["site"] = c.observable.site;

    j["l_list"] = c.l_list;

    j["time_grid"]["kind"] = c.time_grid.kind;
    j["time_grid"]["t0"] = c.time_grid.t0;
    j["time_grid"]["t1"] = c.time_grid.t1;
    j["time_grid"]["n"] = c.time_grid.n;

    j["n_samples"] = c.n_samples;
    j["master_seed"] = c.master_seed;
    j["threads"] = c.threads;
    j["out_dir"] = c.out_dir;
    if (c.cache_dir) j["cache_dir"] = *c.cache_dir;

    j["xi"]["mode"] = c.xi.mode == XiPolicy::Mode::Manual ? "manual" : "fit";
    j["xi"]["value"] = c.xi.value;
    j["xi"]["probe"] = std::string(1, c.xi.probe);
    j["xi"]["distances"] = c.xi.distances;

    j["condition"]["epsilon"] = c.condition.epsilon;
    j["condition"]["l"] = c.condition.l;
    j["condition"]["z"] = c.condition.z;

    j["sweep"]["mode"] = c.sweep.mode;
    j["sweep"]["sizes"] = c.sweep.sizes;

    return j;
}

std::string config_hash(const ExperimentConfig& c) {
    return sha256_hex(config_to_json(c).dump());
}

double resolve_delta(const DeltaPolicy& p, const Spectrum& spec, const LatticeSpec& lattice) {
    switch (p.mode) {
        case DeltaPolicy::Mode::Absolute:
            return p.value;
        case DeltaPolicy::Mode::SigmaRelative: {
            const double mean = spec.energies.mean();
            const double var = (spec.energies.array() - mean).square().mean();
            return p.value * std::sqrt(var);
        }
        case DeltaPolicy::Mode::NPower: {
            const double n = static_cast<double>(lattice.n_sites());
            const double d = static_cast<double>(lattice.dimension);
            const double expo = (1.0 - p.alpha) / (d + 1.0) - p.kappa;
            return p.value * std::pow(n, expo);
        }
    }
    throw std::logic_error("unreachable delta mode");
}

}  // namespace thermalab

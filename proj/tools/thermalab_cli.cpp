#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "thermalab/config.hpp"
#include "thermalab/experiments.hpp"

extern "C" void openblas_set_num_threads(int);

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    std::optional<std::string> cache_dir;
};

void attach_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-c,--config", o.config_path, "Experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Override the master seed");
    cmd->add_option("--out", o.out_dir, "Override the output directory");
    cmd->add_option("--threads", o.threads, "Override the worker thread count");
    cmd->add_option("--cache", o.cache_dir, "Spectrum cache directory");
}

thermalab::ExperimentConfig load(const CommonOpts& o) {
    thermalab::ExperimentConfig cfg = thermalab::load_config(o.config_path);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.threads) cfg.threads = *o.threads;
    if (o.cache_dir) cfg.cache_dir = std::filesystem::path(*o.cache_dir);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    // Worker-level parallelism is managed by the library; nested BLAS threads
    // would only add nondeterministic scheduling noise.
    openblas_set_num_threads(1);

    CLI::App app{"Exact-diagonalization laboratory for energy-smoothed equilibration"};
    app.require_subcommand(1);

    CommonOpts opts;
    using Runner = thermalab::RunReport (*)(const thermalab::ExperimentConfig&,
                                            thermalab::SpectrumProvider&, const std::string&);
    struct Sub {
        const char* name;
        const char* help;
        Runner run;
    };
    const Sub subs[] = {
        {"spectrum", "Diagonalize the model and report the window partition",
         thermalab::run_spectrum_command},
        {"sample", "Sample block unitaries and verify the conjugation norm bound",
         thermalab::run_sample_command},
        {"equilibrium", "Equilibrium-state ensemble statistics and entropy deficits",
         thermalab::run_equilibrium_command},
        {"thermality", "Gibbs comparison: Berry-Esseen, correlation length, condition check",
         thermalab::run_thermality_command},
        {"dynamics", "Time series, window dephasing functions, relaxation bounds",
         thermalab::run_dynamics_command},
        {"moments", "Weingarten tables, Haar moment checks, second-moment concentration",
         thermalab::run_moments_command},
        {"sweep", "Size sweep (thermalization trend) or Gibbs-invariance comparison",
         thermalab::run_sweep_command},
        {"check-assumptions", "Spectral decay/monotonicity diagnostics and energy tails",
         thermalab::run_check_assumptions_command},
    };

    Runner chosen = nullptr;
    for (const Sub& s : subs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        attach_common(cmd, opts);
        cmd->callback([&chosen, run = s.run] { chosen = run; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        const thermalab::ExperimentConfig cfg = load(opts);
        thermalab::SpectrumProvider prov(cfg.cache_dir);
        const thermalab::RunReport rep = chosen(cfg, prov, cfg.out_dir);
        std::cout << rep.command << " finished: " << rep.artifacts.size()
                  << " artifact(s) under " << cfg.out_dir << "\n";
        for (const auto& a : rep.artifacts) std::cout << "  " << a.name << ": " << a.path << "\n";
        std::cout << "  report: " << (std::filesystem::path(cfg.out_dir) / "report.json").string()
                  << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

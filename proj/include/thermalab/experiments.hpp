#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thermalab/config.hpp"
#include "thermalab/ensemble.hpp"
#include "thermalab/gibbs.hpp"
#include "thermalab/hamiltonian.hpp"
#include "thermalab/report.hpp"
#include "thermalab/spectrum.hpp"
#include "thermalab/windows.hpp"

namespace thermalab {

struct SpectrumEntry {
    HamiltonianData ham;
    Spectrum spec;
    double build_seconds = 0.0;
    double solve_seconds = 0.0;  // exactly zero on a cache hit
    bool cache_hit = false;
    std::string key;
};

// Memoizes diagonalizations per model, optionally backed by the binary disk
// cache. A corrupt cache file propagates as CacheCorruptError; it is never
// silently recomputed.
class SpectrumProvider {
  public:
    SpectrumProvider() = default;
    explicit SpectrumProvider(std::optional<std::filesystem::path> cache_dir)
        : cache_dir_(std::move(cache_dir)) {}

    const SpectrumEntry& get(const ModelSpec& model);

  private:
    std::optional<std::filesystem::path> cache_dir_;
    std::map<std::string, SpectrumEntry> memo_;
};

// Everything most pipelines need: spectrum, resolved window partition,
// initial product state in both bases, inverse temperature per policy, and
// the embedded observable.
struct Workbench {
    const SpectrumEntry* entry = nullptr;
    double delta = 0.0;
    WindowPartition part;
    Eigen::VectorXcd c_comp;
    Eigen::VectorXcd c_energy;
    double state_energy = 0.0;
    GibbsState gibbs;
    Eigen::MatrixXcd a_comp;
    Eigen::MatrixXcd a_energy;
};

Workbench make_workbench(const ExperimentConfig& cfg, SpectrumProvider& prov);

// --- top-level experiment pipelines ---------------------------------------

struct ThermalizationSizeResult {
    int side = 0;
    int n_sites = 0;
    long dim = 0;
    double delta = 0.0;
    double beta = 0.0;
    double state_energy = 0.0;
    int n_windows = 0;
    int min_window_dim = 0;
    double spectrum_seconds = 0.0;
    // per sample, keyed by cube side l
    std::map<int, std::vector<double>> dl_samples;
    std::map<int, double> median_dl;
    std::vector<double> eta_bits;
    std::vector<double> p_delta;
    double median_eta_bits = 0.0;
    double median_p_delta = 0.0;
};

struct ThermalizationResult {
    std::vector<ThermalizationSizeResult> sizes;
};

// For each size: product state -> windows -> sampled equilibrium states ->
// local distances against the Gibbs state at the state's energy.
ThermalizationResult run_thermalization_experiment(const ExperimentConfig& cfg,
                                                   SpectrumProvider& prov);

struct GibbsInvarianceResult {
    int n_sites = 0;
    long dim = 0;
    double beta = 0.0;
    double delta = 0.0;
    int n_windows = 0;
    std::map<int, std::vector<double>> dl_windowed;
    std::map<int, std::vector<double>> dl_reference;  // single-window smoothing
    std::map<int, double> median_windowed;
    std::map<int, double> median_reference;
    double ratio_l_first = 0.0;  // windowed / reference at the first l
};

// D_l(g_beta(H), g_beta(U H U^dagger)) sampled over the ensemble, plus the
// maximal-smoothing (single giant window) reference computed in the same run.
GibbsInvarianceResult run_gibbs_invariance_experiment(const ExperimentConfig& cfg,
                                                      SpectrumProvider& prov);

// --- CLI drivers -----------------------------------------------------------
// Each writes its CSV artifacts plus report.json under run_dir and returns
// the report. Metric tables are byte-identical for any thread count.

RunReport run_spectrum_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                               const std::string& run_dir);
RunReport run_sample_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                             const std::string& run_dir);
RunReport run_equilibrium_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                                  const std::string& run_dir);
RunReport run_thermality_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                                 const std::string& run_dir);
RunReport run_dynamics_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                               const std::string& run_dir);
RunReport run_moments_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                              const std::string& run_dir);
RunReport run_sweep_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                            const std::string& run_dir);
RunReport run_check_assumptions_command(const ExperimentConfig& cfg, SpectrumProvider& prov,
                                        const std::string& run_dir);

}  // namespace thermalab

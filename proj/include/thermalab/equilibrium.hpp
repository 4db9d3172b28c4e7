#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "thermalab/ensemble.hpp"
#include "thermalab/gibbs.hpp"
#include "thermalab/spectrum.hpp"
#include "thermalab/windows.hpp"

namespace thermalab {

// Pinching over degeneracy classes: kills every matrix element outside the
// class-diagonal blocks. Plain diagonal truncation when nondegenerate.
DensityMatrix dephase(const DensityMatrix& rho_energy, const Spectrum& spec);

// Equilibrium (infinite-time dephased) state of rho evolving under
// H' = U H U^dagger, in the energy basis of H.
DensityMatrix equilibrium_state(const DensityMatrix& rho_energy, const BlockUnitary& u,
                                const Spectrum& spec);
DensityMatrix equilibrium_state(const Eigen::VectorXcd& c_energy, const BlockUnitary& u,
                                const Spectrum& spec);

// Same state written in the eigenbasis of H' (where it is block diagonal
// over degeneracy classes, hence directly decomposable).
DensityMatrix equilibrium_state_rotated(const Eigen::VectorXcd& c_energy, const BlockUnitary& u,
                                        const Spectrum& spec);

// Same state as a computational-basis low-rank factor, one column per
// degeneracy class. Used for cheap local reductions at large dimension.
FactoredDensity equilibrium_factored(const Eigen::VectorXcd& c_energy, const BlockUnitary& u,
                                     const Spectrum& spec);

FactoredDensity gibbs_factored(const GibbsState& g, const Spectrum& spec);
FactoredDensity rotated_gibbs_factored(const GibbsState& g, const Spectrum& spec,
                                       const BlockUnitary& u);

// Ensemble average of the equilibrium state. For a window of dimension d
// whose degeneracy classes are all singletons this is the closed form
// (q_k identity + psi_kk) / (d_k + 1); with nontrivial classes the twirl
// coefficients generalize accordingly.
DensityMatrix ensemble_average_equilibrium(const Eigen::VectorXcd& c_energy,
                                           const WindowPartition& part, const Spectrum& spec);

// Per-window twirl coefficients (a, b): E_U[sum_c P_c rho_kk P_c] =
// a rho_kk + b tr(rho_kk) identity.
std::pair<double, double> window_twirl_coefficients(const WindowPartition& part,
                                                    const Spectrum& spec, int k);

struct ParticipationStats {
    Eigen::VectorXd purity_samples;
    double mean = 0.0;
    double std_error = 0.0;
    double analytic = 0.0;        // sum_k 2 q_k^2 / (d_k + 1)
    double analytic_draft = 0.0;  // sum_k q_k^2 / (d_k + 1), kept for comparison
};

// Monte Carlo purity of the equilibrium state over the ensemble; for
// nondegenerate windows each sample is sum_nu |<nu|U psi>|^4. The analytic
// mean assumes nondegenerate windows (exact for d_k = 1 too).
ParticipationStats participation_statistics(const Eigen::VectorXcd& c_energy,
                                            const WindowPartition& part, const Spectrum& spec,
                                            std::uint64_t master_seed, int n_samples,
                                            int threads = 1);

struct DeficitSample {
    double eta_bits = 0.0;
    double eta_nats = 0.0;
    double p_delta = 0.0;
};

// Entropy deficit of sampled equilibrium states, decomposed against the
// interval [center - Delta, center + Delta].
std::vector<DeficitSample> entropy_deficit_samples(const Eigen::VectorXcd& c_energy,
                                                   const WindowPartition& part,
                                                   const Spectrum& spec, double e_center,
                                                   double delta_big, std::uint64_t master_seed,
                                                   int n_samples, int threads = 1);

struct EnergyTailRow {
    double threshold = 0.0;
    double tail_weight = 0.0;   // exact weight at E_nu >= threshold
    double eta = 0.0;           // (threshold - offset*N)/N for the bound
    double bound = 0.0;         // exp(-2 eta^2 N / w^2), evaluated verbatim
    bool exceeds_bound = false;
};

// Upper energy tails of a diagonal (energy-basis) weight vector against the
// sub-Gaussian product-state reference. Informative only: the width scale w
// is model dependent and supplied by the caller.
std::vector<EnergyTailRow> energy_tail_report(const Eigen::VectorXd& weights,
                                              const Spectrum& spec,
                                              const std::vector<double>& thresholds, double offset,
                                              double width_scale, int n_sites);

}  // namespace thermalab

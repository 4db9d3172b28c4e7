#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "thermalab/lattice.hpp"
#include "thermalab/spectrum.hpp"

namespace thermalab {

struct GibbsState {
    double beta = 0.0;
    double ln_z = 0.0;
    double mean_energy = 0.0;
    double variance = 0.0;
    Eigen::VectorXd weights;  // energy-basis diagonal, sums to 1
};

// Weights use exponent shifting, so any |beta| up to the solver cap is safe.
GibbsState gibbs_state(const Spectrum& spec, double beta);

// Bisection on the strictly decreasing E(beta), bracket doubling from
// [-64, 64] up to |beta| = 2^20. Targets outside the open spectral interval
// throw UnattainableEnergyError.
double solve_beta(const Spectrum& spec, double e_target, double tol);

struct BerryEsseen {
    double zeta = 0.0;
    double at_energy = 0.0;  // jump point attaining the sup
};

// sup_x |F(x) - G(x)| with F the cumulative weight distribution over the
// spectrum and G a Gaussian CDF. G takes the weights' mean and variance
// unless explicit moments are supplied.
BerryEsseen berry_esseen_error(const Eigen::VectorXd& energies, const Eigen::VectorXd& weights,
                               std::optional<std::pair<double, double>> moments = std::nullopt);

struct CorrelationFit {
    double xi = 0.0;          // correlation length
    double z_amp = 0.0;       // amplitude exponent: intercept / ln(n_sites)
    double residual_rms = 0.0;
    std::vector<std::pair<int, double>> points;  // (distance, |connected correlator|)
};

// Connected two-point correlators of a single-site probe along the first
// axis, fit to log-linear decay. Correlators below 1e-14 are dropped; fewer
// than three usable points throws InsufficientDataError.
CorrelationFit fit_correlation_length(const Eigen::MatrixXcd& rho_comp,
                                      const LatticeSpec& lattice, char probe,
                                      const std::vector<int>& distances);

// S(tau || gibbs) in nats via -S(tau) + beta tr(H tau) + ln Z.
double relative_entropy_vs_gibbs(const DensityMatrix& tau_energy, const GibbsState& gibbs,
                                 const Spectrum& spec);
// Independent route: tr(tau ln tau) - tr(tau ln g). Requires full rank.
double relative_entropy_direct(const DensityMatrix& tau_energy, const GibbsState& gibbs,
                               const Spectrum& spec);

}  // namespace thermalab

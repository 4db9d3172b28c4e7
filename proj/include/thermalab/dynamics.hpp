#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "thermalab/ensemble.hpp"
#include "thermalab/spectrum.hpp"
#include "thermalab/windows.hpp"

namespace thermalab {

// Strictly increasing times, t >= 0, in inverse-energy units (hbar = 1).
struct TimeGrid {
    std::vector<double> times;

    void validate() const;
    static TimeGrid linspace(double t0, double t1, int n);
    static TimeGrid logspace(double t0, double t1, int n);  // t0 > 0
};

// <A>(t) for a pure state, both in the energy basis. Exact phase sums.
Eigen::VectorXd evolve_expectation(const Eigen::VectorXcd& c_energy, const Spectrum& spec,
                                   const Eigen::MatrixXcd& a_energy, const TimeGrid& grid);
Eigen::VectorXd evolve_expectation(const DensityMatrix& rho_energy, const Spectrum& spec,
                                   const Eigen::MatrixXcd& a_energy, const TimeGrid& grid);

struct LongTimeAverage {
    double average = 0.0;        // trapezoid over [0, T_max]
    double dephased_value = 0.0; // tr(rho_inf A)
    double gap = 0.0;            // |average - dephased_value|
};

LongTimeAverage long_time_average(const Eigen::VectorXcd& c_energy, const Spectrum& spec,
                                  const Eigen::MatrixXcd& a_energy, double t_max, int n_points);

// Per-window phase averages phi_k(t) = (1/d_k) sum_nu exp(-i t E_nu) and
// F_k(t) = (d_k |phi_k|^2 - 1)/(d_k - 1); singleton windows report F = 1
// with a flag.
struct WindowDynamics {
    std::vector<double> times;
    Eigen::MatrixXcd phi;  // windows x times
    Eigen::MatrixXd f;
    std::vector<char> singleton;
    std::vector<int> dims;
    std::vector<double> lo, width;
};

WindowDynamics window_dynamics(const Spectrum& spec, const WindowPartition& part,
                               const TimeGrid& grid);

// Infinite-time average of F_k: ((sum_c m_c^2)/d_k - 1)/(d_k - 1) over the
// window's degeneracy classes; 1 for singletons.
double average_f(const Spectrum& spec, const WindowPartition& part, int k);

// Flat-density approximation of phi_k: the exact window integral
// exp(-i t lo) (1 - exp(-i t w))/(i t w), evaluated stably.
Eigen::MatrixXcd constant_dos_phi(const WindowDynamics& wd);

struct ConstantDosComparison {
    Eigen::MatrixXcd phi_flat;     // windows x times
    Eigen::MatrixXd abs_error;     // |phi - phi_flat|
    Eigen::VectorXd max_spacing;   // per window: worst consecutive level gap
};

// The per-time error bound for window k is t * max_spacing(k).
ConstantDosComparison constant_dos_comparison(const Spectrum& spec, const WindowPartition& part,
                                              const WindowDynamics& wd);

struct ExpectedDynamics {
    std::vector<double> times;
    Eigen::VectorXd series;          // E_U[<A>(t)]
    double equilibrium_value = 0.0;  // E_U[tr(A psi_inf)]
    double initial_value = 0.0;      // <psi|A|psi>
    double infinite_time_value = 0.0;
};

// Closed-form ensemble average of <A>(t) under H' = U H U^dagger:
// equilibrium term + cross-window phi_k conj(phi_k') coherences + per-window
// F_k(t) relaxation toward the twirled expectation.
ExpectedDynamics expected_dynamics(const Eigen::VectorXcd& c_energy,
                                   const Eigen::MatrixXcd& a_energy, const Spectrum& spec,
                                   const WindowPartition& part, const TimeGrid& grid);

struct RelaxationBound {
    std::vector<double> times;
    Eigen::VectorXd r;       // ||A|| (K^2 max_{k,j} |phi_k conj(phi_j)| + 2 max_k F_k)
    Eigen::VectorXd r_flat;  // same with flat-density phi
    double a_norm = 0.0;
};

RelaxationBound relaxation_bound(const WindowDynamics& wd, double a_norm);

// Least-squares slope of ln(value) vs ln(t) through the local maxima of the
// series inside [t_min, t_max]; needs at least three maxima.
double envelope_loglog_slope(const std::vector<double>& times, const Eigen::VectorXd& values,
                             double t_min, double t_max);

struct DistanceBoundSeries {
    std::vector<double> times;
    Eigen::VectorXd distance;  // ||rho^H(t) - rho^H'(t)||_1
    Eigen::VectorXd bound;     // 2 t ||H - H'||_inf
    double max_violation = 0.0;
};

// Exact propagator comparison; dimensions above 2^10 are refused because
// full propagators are materialized here.
DistanceBoundSeries dynamics_distance_bound(const Eigen::MatrixXcd& rho_comp,
                                            const Eigen::MatrixXcd& h,
                                            const Eigen::MatrixXcd& h_prime,
                                            const TimeGrid& grid);

struct DynamicsConcentration {
    std::vector<double> times;
    Eigen::VectorXd mean;
    Eigen::VectorXd variance;
    Eigen::MatrixXd samples;  // n_samples x times
    int min_window_dim = 0;
};

// Monte Carlo spread of <A>_{rho_U(t)} over the ensemble.
DynamicsConcentration mc_dynamics_concentration(const Eigen::VectorXcd& c_energy,
                                                const Eigen::MatrixXcd& a_energy,
                                                const Spectrum& spec, const WindowPartition& part,
                                                const TimeGrid& grid, int n_samples,
                                                std::uint64_t master_seed, int threads = 1);

// Levy-style reference tail weight exp(-c d_min eps^2 / ||A||^2).
double levy_reference(double eps, int min_window_dim, double a_norm, double c = 1.0);

}  // namespace thermalab

#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "thermalab/ensemble.hpp"
#include "thermalab/spectrum.hpp"
#include "thermalab/windows.hpp"

namespace thermalab {

enum class CycleType { Identity, Transposition, ThreeCycle };

// Exact unitary-group Weingarten values for degrees 2 and 3 (labels are
// cycle types, which determine the class at these degrees). Degree 2 needs
// d >= 2, degree 3 needs d >= 3; smaller d hits a zero denominator.
double weingarten(int degree, CycleType cls, int d);

// Max over sigma of |sum_tau Wg(sigma tau^{-1}, d) d^{#cycles(tau)} -
// [sigma == id]|, the orthogonality relation defining Wg.
double weingarten_gram_residual(int degree, int d);

struct HaarMomentReport {
    double first_moment_max_se = 0.0;   // worst entry of E[U A U+] vs tr(A)/d
    double second_moment_mc = 0.0;      // E[tr(UAU+B) tr(UCU+D)] estimate
    double second_moment_analytic = 0.0;
    double second_moment_dev_se = 0.0;
    int n_samples = 0;
};

// Monte-Carlo check of the first and second Haar moments on one block,
// against tr(A)/d and the degree-2 Weingarten expansion.
HaarMomentReport haar_moment_verify(int d, int n_samples, std::uint64_t seed);

// The degree-2 expansion itself (exposed for direct testing):
// Wg(id)[trA trC trB trD + tr(AC) tr(BD)] + Wg(swap)[trA trC tr(BD) + tr(AC) trB trD].
Complex haar_second_moment(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                           const Eigen::MatrixXcd& c, const Eigen::MatrixXcd& d);

struct SecondMomentReport {
    double mean = 0.0;
    double variance = 0.0;
    int min_window_dim = 0;
    double variance_times_dmin = 0.0;
    Eigen::VectorXd samples;
};

// Spread of tr(rho_inf^{UHU+} A) over the ensemble; the variance should
// scale like 1/d_min across partitions.
SecondMomentReport equilibrium_second_moment_check(const Eigen::VectorXcd& c_energy,
                                                   const Eigen::MatrixXcd& a_energy,
                                                   const WindowPartition& part,
                                                   const Spectrum& spec, std::uint64_t master_seed,
                                                   int n_samples, int threads = 1);

}  // namespace thermalab

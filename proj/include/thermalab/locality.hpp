#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "thermalab/gibbs.hpp"
#include "thermalab/lattice.hpp"
#include "thermalab/operators.hpp"
#include "thermalab/spectrum.hpp"

namespace thermalab {

struct LocalDistances {
    double value = 0.0;            // D_l: mean of per-cube trace distances
    std::vector<Region> cubes;     // enumeration order fixed by the lattice
    std::vector<double> per_cube;
};

// D_l(rho, sigma) = average over side-l hypercubes C of ||rho_C - sigma_C||_1.
LocalDistances local_distinguishability(const Eigen::MatrixXcd& rho,
                                        const Eigen::MatrixXcd& sigma, int l,
                                        const LatticeSpec& lattice, int threads = 1);
// Same metric for factored states rho = X X^dagger, avoiding dense dim^2
// intermediates.
LocalDistances local_distinguishability(const FactoredDensity& rho, const FactoredDensity& sigma,
                                        int l, const LatticeSpec& lattice, int threads = 1);

struct TranslationGap {
    double gap = 0.0;  // |tr(rho (A_X - A_Y))|
    std::vector<int> shift;
    Eigen::VectorXd eigenstate_invariance;  // |<nu|T|nu>| per eigenstate
    double min_invariance = 0.0;
};

// Difference of one observable evaluated on two translation-congruent
// regions, plus the table checking that eigenstates are T-invariant. The
// translation vector is computed and verified, never asserted by the caller.
TranslationGap translation_gap(const Eigen::MatrixXcd& rho_comp, const Eigen::MatrixXcd& a_block,
                               const Region& x, const Region& y, const LatticeSpec& lattice,
                               const Spectrum& spec, const Eigen::MatrixXcd& t);

struct ConditionReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double s_rel_bits = 0.0;  // S(tau || gibbs) in bits
    double epsilon = 0.0;
    int l = 0;
    double xi = 0.0;
    double z = 0.0;
    std::string xi_source = "manual";
    double guaranteed_bound = 0.0;  // 7 sqrt(epsilon) when satisfied, else 0
};

// Sufficient condition for local indistinguishability from the Gibbs state:
//   (S + 3)/eps + (2 xi ln(d) l^D + l + 2)/(xi ln 2) + log2(N^(z+1))
//     <= (eps N / (ln(4)^D xi^D))^(1/(D+1))
// with S in bits. When it holds, the average local distance over side-l
// cubes is at most 7 sqrt(eps).
ConditionReport check_indistinguishability_condition(const DensityMatrix& tau_energy,
                                                     const GibbsState& gibbs,
                                                     const Spectrum& spec, double epsilon, int l,
                                                     double xi, double z,
                                                     const LatticeSpec& lattice);

}  // namespace thermalab

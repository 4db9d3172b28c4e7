#pragma once

#include <Eigen/Dense>
#include <complex>

#include "thermalab/lattice.hpp"

namespace thermalab {

using Complex = std::complex<double>;

enum class Basis { Computational, Energy };

struct StateVector {
    Eigen::VectorXcd vec;
    Basis basis = Basis::Computational;
};

struct DensityMatrix {
    Eigen::MatrixXcd mat;
    Basis basis = Basis::Computational;
};

// Low-rank factor of a positive operator: rho = cols * cols^dagger. Used to
// reduce equilibrium and Gibbs states without materializing dim x dim
// matrices in the computational basis.
struct FactoredDensity {
    Eigen::MatrixXcd cols;  // computational basis rows
};

Eigen::MatrixXcd pauli(char which);  // 'i', 'x', 'y', 'z'
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

long region_dim(const Region& r, const LatticeSpec& lattice);

// Places a block acting on `region` into the full Hilbert space, identity
// elsewhere. Within the region the first (lowest-index) site is the most
// significant digit, matching the global ordering.
Eigen::MatrixXcd embed_observable(const Eigen::MatrixXcd& block, const Region& region,
                                  const LatticeSpec& lattice);

Eigen::MatrixXcd partial_trace(const Eigen::MatrixXcd& rho, const Region& keep,
                               const LatticeSpec& lattice);
// Same reduction for rho = cols * cols^dagger.
Eigen::MatrixXcd partial_trace_columns(const Eigen::MatrixXcd& cols, const Region& keep,
                                       const LatticeSpec& lattice);

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
double operator_norm(const Eigen::MatrixXcd& a);  // Hermitian input
double hermiticity_residual(const Eigen::MatrixXcd& a);

// Product state with uniform Bloch angles: per site
// cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>.
Eigen::VectorXcd bloch_product_state(const LatticeSpec& lattice, double theta, double phi);
Eigen::VectorXcd bloch_product_state(const LatticeSpec& lattice,
                                     const std::vector<std::pair<double, double>>& angles);

}  // namespace thermalab

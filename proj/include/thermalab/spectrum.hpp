#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "thermalab/operators.hpp"

namespace thermalab {

struct Spectrum {
    Eigen::VectorXd energies;    // ascending
    Eigen::MatrixXcd vectors;    // columns, computational basis
    double max_residual = 0.0;   // max_i ||H v_i - E_i v_i||_2 / max(1, |E|_max)
    double ortho_residual = 0.0;
    // Degeneracy classes as [begin, end) index ranges, ascending.
    std::vector<std::pair<int, int>> classes;

    long dim() const { return energies.size(); }
};

// Dense Hermitian diagonalization. Eigenvector phases are fixed by making
// the largest-magnitude entry of each column real positive (ties broken by
// the lowest index), so repeated runs give identical output.
Spectrum diagonalize(const Eigen::MatrixXcd& h, double degeneracy_rel_tol = 1e-9);

std::vector<std::pair<int, int>> degeneracy_classes(const Eigen::VectorXd& energies,
                                                    double rel_tol = 1e-9);

StateVector to_energy_basis(const StateVector& s, const Spectrum& spec);
StateVector to_computational(const StateVector& s, const Spectrum& spec);
DensityMatrix to_energy_basis(const DensityMatrix& r, const Spectrum& spec);
DensityMatrix to_computational(const DensityMatrix& r, const Spectrum& spec);

// Von Neumann entropy in nats. The input must be Hermitian, unit trace
// within 1e-9, and positive semidefinite up to -1e-10 eigenvalue round-off.
double von_neumann_entropy(const DensityMatrix& rho);

}  // namespace thermalab

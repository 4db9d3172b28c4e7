#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "thermalab/lattice.hpp"

namespace thermalab {

enum class ModelKind { MixedFieldIsing, HeisenbergXXZ, Custom };

// One local term: coefficient times a unit-operator-norm Hermitian block on
// an ordered region.
struct Term {
    Region region;
    Eigen::MatrixXcd block;
    double coefficient = 0.0;
};

struct CustomTerm {
    Region region;
    Eigen::MatrixXcd block;
};

struct ModelSpec {
    LatticeSpec lattice;
    ModelKind kind = ModelKind::MixedFieldIsing;
    std::map<std::string, double> couplings;
    std::vector<CustomTerm> custom_terms;
    int max_log2_dim = 13;

    double coupling(const std::string& name, double fallback) const;
};

struct HamiltonianData {
    Eigen::MatrixXcd matrix;  // computational basis
    std::vector<Term> terms;
    double hermiticity = 0.0;     // recorded residual
    int locality_diameter = 0;    // max term-region diameter
};

// Mixed-field Ising defaults: J = 1, hx = 1.05, hz = 0.5 with
// H = J sum ZZ + hx sum X + hz sum Z over nearest-neighbor bonds and sites.
HamiltonianData build_hamiltonian(const ModelSpec& spec);

// Permutation unitary of the cyclic one-site shift along an axis. Requires
// periodic boundary; T^n = identity.
Eigen::MatrixXcd translation_operator(const LatticeSpec& lattice, int axis);

}  // namespace thermalab

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "thermalab/rng.hpp"
#include "thermalab/spectrum.hpp"
#include "thermalab/windows.hpp"

namespace thermalab {

// Direct sum of independent Haar blocks, one per energy window. Stored
// blocks-only; the full matrix never materializes unless a caller embeds it.
struct BlockUnitary {
    std::vector<Eigen::MatrixXcd> blocks;
    std::vector<std::pair<int, int>> range;  // copied from the partition
    std::uint64_t master_seed = 0;
    std::uint64_t sample_index = 0;

    int count() const { return static_cast<int>(blocks.size()); }
    long dim() const;
};

// Exact Haar sample via Ginibre + QR with the R-diagonal phase correction.
Eigen::MatrixXcd haar_unitary(int d, RngStream& rng);

BlockUnitary sample_block_unitary(const WindowPartition& part, std::uint64_t master_seed,
                                  std::uint64_t sample_index);

double unitarity_residual(const BlockUnitary& u);

Eigen::VectorXcd apply_block_unitary(const BlockUnitary& u, const Eigen::VectorXcd& c_energy,
                                     bool adjoint = false);
// U A U^dagger for an operator given in the energy basis.
Eigen::MatrixXcd conjugate_energy_operator(const BlockUnitary& u, const Eigen::MatrixXcd& a);

struct ConjugatedHamiltonian {
    Eigen::MatrixXcd matrix;     // computational basis
    double op_norm_diff = 0.0;   // ||H - H'||_inf, exact via window blocks
};

// H' = V (U Lambda U^dagger) V^dagger: same spectrum, rotated eigenbasis.
ConjugatedHamiltonian conjugate_hamiltonian(const Spectrum& spec, const BlockUnitary& u);

struct EnergyConcentration {
    double state_energy = 0.0;
    double mean_shift = 0.0;
    double max_abs_shift = 0.0;
    double sample_std = 0.0;
    double hard_bound = 0.0;  // max_k window width
    bool hard_bound_ok = false;
    int n_samples = 0;
};

// Samples <psi|U^dagger H U|psi> over the ensemble. Each sample obeys
// |shift| <= max_k delta_k because U moves weight only within windows.
EnergyConcentration mc_energy_concentration(const Spectrum& spec, const WindowPartition& part,
                                            const Eigen::VectorXcd& c_energy,
                                            std::uint64_t master_seed, int n_samples,
                                            int threads = 1);

}  // namespace thermalab

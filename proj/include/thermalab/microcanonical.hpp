#pragma once

#include <Eigen/Dense>

#include "thermalab/spectrum.hpp"
#include "thermalab/windows.hpp"

namespace thermalab {

// Maximally mixed state on window k, energy basis.
DensityMatrix microcanonical_state(const WindowPartition& part, int k, long dim);

// Generalized micro-canonical state: sum_k q_k times the window-k
// micro-canonical state. q must be a probability vector over windows.
DensityMatrix gme_state(const WindowPartition& part, const Eigen::VectorXd& q, long dim);

// Interval bookkeeping shared by every approximate-decomposition routine:
// the center snaps to the partition grid and the interval keeps the windows
// lying fully inside [center - Delta, center + Delta].
struct AgmeInterval {
    double center = 0.0;
    std::vector<int> windows;
};

// Delta must be a positive integer multiple of the partition width.
AgmeInterval agme_interval(const WindowPartition& part, double e_center, double delta_big);

struct GmeDecomposition {
    double center = 0.0;      // snapped to the partition edge grid
    double half_width = 0.0;  // Delta
    double p_delta = 0.0;     // weight inside [center - Delta, center + Delta]
    double tail_weight = 0.0;
    std::vector<int> windows;         // window indices fully inside the interval
    Eigen::VectorXd q;                // renormalized in-window weights
    Eigen::VectorXd window_entropy;   // S of the normalized window blocks, nats
    double eta_nats = 0.0;            // sum_k q_k (ln d_k - S_k)
    double eta_bits = 0.0;
};

// Decomposes a state that is diagonal up to degeneracy-class blocks in the
// energy basis into the approximate generalized micro-canonical form.
// Delta must be an integer multiple of the partition width; the center
// snaps to the nearest partition grid edge.
GmeDecomposition decompose_agme(const DensityMatrix& rho_energy, const Spectrum& spec,
                                const WindowPartition& part, double e_center, double delta_big);

}  // namespace thermalab

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "thermalab/spectrum.hpp"

namespace thermalab {

// Energy windows [lo_k, hi_k) of nominal width delta anchored at the lowest
// eigenvalue. Empty bins are dropped; when a degeneracy class straddles a
// bin edge the edge moves up past the class (recorded in edge_moved), so no
// class is ever split across windows.
struct WindowPartition {
    double nominal_width = 0.0;
    double anchor = 0.0;
    std::vector<double> lo, hi;
    std::vector<std::pair<int, int>> range;  // eigenvalue index [begin, end)
    std::vector<char> edge_moved;

    int count() const { return static_cast<int>(range.size()); }
    int dim(int k) const { return range[k].second - range[k].first; }
    double width(int k) const { return hi[k] - lo[k]; }
    double max_width() const;
    int min_dim() const;
    int window_of_level(int nu) const;
};

WindowPartition partition_spectrum(const Spectrum& spec, double delta,
                                   std::optional<double> anchor = std::nullopt);

// Per-window weight q_k of a state given in the energy basis.
Eigen::VectorXd window_weights(const Eigen::VectorXcd& c_energy, const WindowPartition& part);
Eigen::VectorXd window_weights(const Eigen::VectorXd& diagonal, const WindowPartition& part);

// M_{c,w} = |{nu : |E_nu - c| <= w}|, absolute-energy convention.
long count_states_in_window(const Spectrum& spec, double center, double half_width);

// Degeneracy classes covered by the index range [begin, end); throws
// BasisMismatchError if a class straddles the range boundary.
std::vector<std::pair<int, int>> classes_in_window(const Spectrum& spec, int begin, int end);

// Density-of-states diagnostics. Assumption one: on a grid of centers above
// the mean energy, counts a distance k*sqrt(n_sites) up must fall off at
// least as fast as 1/k^3. Assumption two: window occupations must be
// non-decreasing with energy below the spectral median. Both are reported,
// never enforced.
struct SpectralAssumptionReport {
    struct DecayRow {
        double center = 0.0;
        int k = 0;
        long m_base = 0;
        long m_shifted = 0;
        double ratio = 0.0;  // k^3 * m_shifted / m_base, pass when <= 1
    };
    std::vector<DecayRow> decay_rows;
    double decay_worst = 0.0;
    bool decay_pass = true;  // vacuous when no valid grid point exists

    struct MonotoneViolation {
        int window = 0;  // dim(window) > dim(window + 1), both below median
        int dim_lo = 0;
        int dim_hi = 0;
    };
    std::vector<MonotoneViolation> monotone_violations;
    int monotone_pairs_checked = 0;
    bool monotone_pass = true;
};

SpectralAssumptionReport spectral_assumption_report(const Spectrum& spec, double delta,
                                                    int n_sites);

}  // namespace thermalab

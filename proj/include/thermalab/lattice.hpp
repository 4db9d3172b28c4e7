#pragma once

#include <utility>
#include <vector>

namespace thermalab {

enum class Boundary { Open, Periodic };

// Ordered (ascending) list of distinct site indices.
using Region = std::vector<int>;

// Hypercubic lattice of side^dimension sites with a local_dim-level system
// on each site. Site indices are row-major over coordinates; site 0 carries
// the most significant digit of a computational basis index.
struct LatticeSpec {
    int dimension = 1;
    int side = 2;
    int local_dim = 2;
    Boundary boundary = Boundary::Periodic;

    void validate() const;
    int n_sites() const;
    // Throws DimensionGuardError when local_dim^n_sites exceeds 2^max_log2.
    long hilbert_dim(int max_log2 = 13) const;

    std::vector<int> coords(int site) const;
    int site(const std::vector<int>& c) const;
    std::vector<int> neighbors(int s) const;
    // Unique nearest-neighbor pairs (a < b), wrap bonds included when periodic.
    std::vector<std::pair<int, int>> bonds() const;
    // Manhattan distance, wrap-aware per axis when periodic.
    int distance(int a, int b) const;
    int region_diameter(const Region& r) const;
    // All axis-aligned side-l hypercubes: (side-l+1)^dimension regions when
    // open, side^dimension anchors when periodic. Requires 1 <= l <= side.
    std::vector<Region> cubes(int l) const;
};

void validate_region(const Region& r, const LatticeSpec& lattice);

}  // namespace thermalab

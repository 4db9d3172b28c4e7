#include "thermalab/lattice.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

#include "thermalab/errors.hpp"

namespace thermalab {

void LatticeSpec::validate() const {
    if (dimension < 1) throw std::invalid_argument("lattice dimension must be >= 1");
    if (side < 1) throw std::invalid_argument("lattice side must be >= 1");
    if (local_dim < 2) throw std::invalid_argument("local dimension must be >= 2");
}

int LatticeSpec::n_sites() const {
    validate();
    long n = 1;
    for (int a = 0; a < dimension; ++a) {
        n *= side;
        if (n > (1 << 20)) throw std::invalid_argument("site count overflow");
    }
    return static_cast<int>(n);
}

long LatticeSpec::hilbert_dim(int max_log2) const {
    const long cap = 1L << max_log2;
    long dim = 1;
    for (int s = 0; s < n_sites(); ++s) {
        dim *= local_dim;
        if (dim > cap)
            throw DimensionGuardError("Hilbert dimension exceeds 2^" + std::to_string(max_log2) +
                                      " guard");
    }
    return dim;
}

std::vector<int> LatticeSpec::coords(int s) const {
    if (s < 0 || s >= n_sites()) throw std::invalid_argument("site index out of range");
    std::vector<int> c(dimension);
    for (int a = dimension - 1; a >= 0; --a) {
        c[a] = s % side;
        s /= side;
    }
    return c;
}

int LatticeSpec::site(const std::vector<int>& c) const {
    if (static_cast<int>(c.size()) != dimension)
        throw std::invalid_argument("coordinate rank mismatch");
    int s = 0;
    for (int a = 0; a < dimension; ++a) {
        if (c[a] < 0 || c[a] >= side) throw std::invalid_argument("coordinate out of range");
        s = s * side + c[a];
    }
    return s;
}

std::vector<int> LatticeSpec::neighbors(int s) const {
    std::vector<int> out;
    const std::vector<int> c = coords(s);
    std::vector<int> nb = c;
    for (int a = 0; a < dimension; ++a) {
        for (int dir : {-1, +1}) {
            int x = c[a] + dir;
            if (boundary == Boundary::Periodic) {
                x = (x + side) % side;
            } else if (x < 0 || x >= side) {
                continue;
            }
            if (x == c[a]) continue;  // side == 1
            nb[a] = x;
            out.push_back(site(nb));
            nb[a] = c[a];
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::pair<int, int>> LatticeSpec::bonds() const {
    std::set<std::pair<int, int>> uniq;
    const int n = n_sites();
    for (int s = 0; s < n; ++s) {
        for (int nb : neighbors(s)) uniq.insert({std::min(s, nb), std::max(s, nb)});
    }
    return {uniq.begin(), uniq.end()};
}

int LatticeSpec::distance(int a, int b) const {
    const std::vector<int> ca = coords(a), cb = coords(b);
    int dist = 0;
    for (int ax = 0; ax < dimension; ++ax) {
        int d = std::abs(ca[ax] - cb[ax]);
        if (boundary == Boundary::Periodic) d = std::min(d, side - d);
        dist += d;
    }
    return dist;
}

int LatticeSpec::region_diameter(const Region& r) const {
    validate_region(r, *this);
    int diam = 0;
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = i + 1; j < r.size(); ++j) diam = std::max(diam, distance(r[i], r[j]));
    return diam;
}

std::vector<Region> LatticeSpec::cubes(int l) const {
    if (l < 1 || l > side) throw std::invalid_argument("cube side must satisfy 1 <= l <= side");
    const int anchor_range = (boundary == Boundary::Periodic) ? side : side - l + 1;

    long n_anchors = 1;
    for (int a = 0; a < dimension; ++a) n_anchors *= anchor_range;
    long cube_sites = 1;
    for (int a = 0; a < dimension; ++a) cube_sites *= l;

    std::vector<Region> out;
    out.reserve(n_anchors);
    std::vector<int> anchor(dimension, 0);
    for (long ai = 0; ai < n_anchors; ++ai) {
        long rest = ai;
        for (int a = dimension - 1; a >= 0; --a) {
            anchor[a] = static_cast<int>(rest % anchor_range);
            rest /= anchor_range;
        }
        Region r;
        r.reserve(cube_sites);
        std::vector<int> c(dimension);
        for (long oi = 0; oi < cube_sites; ++oi) {
            long o = oi;
            for (int a = dimension - 1; a >= 0; --a) {
                int off = static_cast<int>(o % l);
                o /= l;
                c[a] = (anchor[a] + off) % side;
            }
            r.push_back(site(c));
        }
        std::sort(r.begin(), r.end());
        out.push_back(std::move(r));
    }
    return out;
}

void validate_region(const Region& r, const LatticeSpec& lattice) {
    if (r.empty()) throw std::invalid_argument("region must be non-empty");
    const int n = lattice.n_sites();
    for (size_t i = 0; i < r.size(); ++i) {
        if (r[i] < 0 || r[i] >= n) throw std::invalid_argument("region site out of range");
        if (i > 0 && r[i] <= r[i - 1])
            throw std::invalid_argument("region sites must be ascending and distinct");
    }
}

}  // namespace thermalab

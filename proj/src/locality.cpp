#include "thermalab/locality.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "thermalab/errors.hpp"
#include "thermalab/parallel.hpp"

namespace thermalab {

namespace {

template <typename Reduce>
LocalDistances distances_over_cubes(int l, const LatticeSpec& lattice, int threads,
                                    const Reduce& reduce_pair) {
    LocalDistances out;
    out.cubes = lattice.cubes(l);
    const int n = static_cast<int>(out.cubes.size());
    out.per_cube.assign(n, 0.0);
    parallel_for(n, threads, [&](int i) {
        const auto [ra, rb] = reduce_pair(out.cubes[i]);
        out.per_cube[i] = trace_distance(ra, rb);
    });
    for (double v : out.per_cube) out.value += v;
    out.value /= std::max(1, n);
    return out;
}

}  // namespace

LocalDistances local_distinguishability(const Eigen::MatrixXcd& rho,
                                        const Eigen::MatrixXcd& sigma, int l,
                                        const LatticeSpec& lattice, int threads) {
    if (rho.rows() != sigma.rows())
        throw std::invalid_argument("local_distinguishability: dimension mismatch");
    return distances_over_cubes(l, lattice, threads, [&](const Region& c) {
        return std::make_pair(partial_trace(rho, c, lattice), partial_trace(sigma, c, lattice));
    });
}

LocalDistances local_distinguishability(const FactoredDensity& rho, const FactoredDensity& sigma,
                                        int l, const LatticeSpec& lattice, int threads) {
    if (rho.cols.rows() != sigma.cols.rows())
        throw std::invalid_argument("local_distinguishability: dimension mismatch");
    return distances_over_cubes(l, lattice, threads, [&](const Region& c) {
        return std::make_pair(partial_trace_columns(rho.cols, c, lattice),
                              partial_trace_columns(sigma.cols, c, lattice));
    });
}

TranslationGap translation_gap(const Eigen::MatrixXcd& rho_comp, const Eigen::MatrixXcd& a_block,
                               const Region& x, const Region& y, const LatticeSpec& lattice,
                               const Spectrum& spec, const Eigen::MatrixXcd& t) {
    validate_region(x, lattice);
    validate_region(y, lattice);
    if (x.size() != y.size())
        throw std::invalid_argument("translation_gap: regions differ in size");

    // Find the translation vector from the first sites, then require it to
    // map x onto y exactly (as sets; both regions are stored sorted).
    TranslationGap out;
    out.shift.resize(lattice.dimension);
    const auto cx = lattice.coords(x.front());
    const auto cy = lattice.coords(y.front());
    for (int a = 0; a < lattice.dimension; ++a) {
        int s = cy[a] - cx[a];
        if (lattice.boundary == Boundary::Periodic) s = ((s % lattice.side) + lattice.side) % lattice.side;
        out.shift[a] = s;
    }
    Region mapped;
    for (int site : x) {
        auto c = lattice.coords(site);
        for (int a = 0; a < lattice.dimension; ++a) {
            c[a] += out.shift[a];
            if (lattice.boundary == Boundary::Periodic) {
                c[a] %= lattice.side;
            } else if (c[a] < 0 || c[a] >= lattice.side) {
                throw std::invalid_argument("translation_gap: shifted region leaves the lattice");
            }
        }
        mapped.push_back(lattice.site(c));
    }
    std::sort(mapped.begin(), mapped.end());
    if (mapped != y)
        throw std::invalid_argument("translation_gap: regions are not translation congruent");

    const Eigen::MatrixXcd ax = embed_observable(a_block, x, lattice);
    const Eigen::MatrixXcd ay = embed_observable(a_block, y, lattice);
    out.gap = std::abs(((ax - ay) * rho_comp).trace());

    out.eigenstate_invariance.resize(spec.dim());
    for (long nu = 0; nu < spec.dim(); ++nu) {
        out.eigenstate_invariance(nu) = std::abs(spec.vectors.col(nu).dot(t * spec.vectors.col(nu)));
    }
    out.min_invariance = out.eigenstate_invariance.minCoeff();
    return out;
}

ConditionReport check_indistinguishability_condition(const DensityMatrix& tau_energy,
                                                     const GibbsState& gibbs,
                                                     const Spectrum& spec, double epsilon, int l,
                                                     double xi, double z,
                                                     const LatticeSpec& lattice) {
    if (epsilon <= 0.0 || xi <= 0.0)
        throw std::invalid_argument("check_indistinguishability_condition: need eps > 0, xi > 0");
    if (l < 1 || l > lattice.side)
        throw std::invalid_argument("check_indistinguishability_condition: bad cube side");

    ConditionReport rep;
    rep.epsilon = epsilon;
    rep.l = l;
    rep.xi = xi;
    rep.z = z;
    rep.s_rel_bits = relative_entropy_vs_gibbs(tau_energy, gibbs, spec) / std::log(2.0);

    const double big_d = static_cast<double>(lattice.dimension);
    const double n = static_cast<double>(lattice.n_sites());
    const double ln_d = std::log(static_cast<double>(lattice.local_dim));
    const double l_pow_d = std::pow(static_cast<double>(l), big_d);

    rep.lhs = (rep.s_rel_bits + 3.0) / epsilon +
              (2.0 * xi * ln_d * l_pow_d + l + 2.0) / (xi * std::log(2.0)) +
              (z + 1.0) * std::log2(n);
    rep.rhs = std::pow(epsilon * n / (std::pow(std::log(4.0), big_d) * std::pow(xi, big_d)),
                       1.0 / (big_d + 1.0));
    rep.satisfied = rep.lhs <= rep.rhs;
    rep.guaranteed_bound = rep.satisfied ? 7.0 * std::sqrt(epsilon) : 0.0;
    return rep;
}

}  // namespace thermalab

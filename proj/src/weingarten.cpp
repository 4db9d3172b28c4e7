#include "thermalab/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "thermalab/errors.hpp"
#include "thermalab/parallel.hpp"
#include "thermalab/rng.hpp"

namespace thermalab {

namespace {

std::vector<std::vector<int>> permutations_of(int degree) {
    std::vector<int> p(degree);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

int cycle_count(const std::vector<int>& p) {
    std::vector<char> seen(p.size(), 0);
    int cycles = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (std::size_t j = i; !seen[j]; j = p[j]) seen[j] = 1;
    }
    return cycles;
}

// Cycle count identifies the class at degrees 2 and 3.
double wg_by_cycles(int degree, int cycles, int d) {
    if (degree == 2) return weingarten(2, cycles == 2 ? CycleType::Identity : CycleType::Transposition, d);
    switch (cycles) {
        case 3: return weingarten(3, CycleType::Identity, d);
        case 2: return weingarten(3, CycleType::Transposition, d);
        default: return weingarten(3, CycleType::ThreeCycle, d);
    }
}

Eigen::MatrixXcd gaussian_matrix(int d, RngStream& rng) {
    Eigen::MatrixXcd m(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) m(i, j) = rng.gaussian_complex();
    return m;
}

}  // namespace

double weingarten(int degree, CycleType cls, int d) {
    const double dd = static_cast<double>(d);
    if (degree == 2) {
        if (d < 2) throw UnsupportedError("degree-2 Weingarten undefined at d < 2");
        switch (cls) {
            case CycleType::Identity: return 1.0 / (dd * dd - 1.0);
            case CycleType::Transposition: return -1.0 / (dd * (dd * dd - 1.0));
            default: throw std::invalid_argument("no 3-cycle exists at degree 2");
        }
    }
    if (degree == 3) {
        if (d < 3) throw UnsupportedError("degree-3 Weingarten undefined at d < 3");
        const double den = dd * (dd * dd - 1.0) * (dd * dd - 4.0);
        switch (cls) {
            case CycleType::Identity: return (dd * dd - 2.0) / den;
            case CycleType::Transposition: return -1.0 / ((dd * dd - 1.0) * (dd * dd - 4.0));
            case CycleType::ThreeCycle: return 2.0 / den;
        }
    }
    throw UnsupportedError("Weingarten values implemented for degrees 2 and 3 only");
}

double weingarten_gram_residual(int degree, int d) {
    if (degree != 2 && degree != 3)
        throw UnsupportedError("Weingarten Gram check implemented for degrees 2 and 3 only");
    const auto perms = permutations_of(degree);
    double worst = 0.0;
    for (const auto& sigma : perms) {
        double sum = 0.0;
        for (const auto& tau : perms) {
            std::vector<int> tau_inv(tau.size());
            for (std::size_t i = 0; i < tau.size(); ++i) tau_inv[tau[i]] = static_cast<int>(i);
            std::vector<int> prod(tau.size());
            for (std::size_t i = 0; i < tau.size(); ++i) prod[i] = sigma[tau_inv[i]];
            sum += wg_by_cycles(degree, cycle_count(prod), d) *
                   std::pow(static_cast<double>(d), cycle_count(tau));
        }
        const bool is_id = cycle_count(sigma) == degree;
        worst = std::max(worst, std::abs(sum - (is_id ? 1.0 : 0.0)));
    }
    return worst;
}

Complex haar_second_moment(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                           const Eigen::MatrixXcd& c, const Eigen::MatrixXcd& d) {
    const int dim = static_cast<int>(a.rows());
    const Complex n_e = a.trace() * c.trace();
    const Complex n_s = (a * c).trace();
    const Complex m_e = b.trace() * d.trace();
    const Complex m_s = (b * d).trace();
    const double wg_e = weingarten(2, CycleType::Identity, dim);
    const double wg_s = weingarten(2, CycleType::Transposition, dim);
    return wg_e * (n_e * m_e + n_s * m_s) + wg_s * (n_e * m_s + n_s * m_e);
}

HaarMomentReport haar_moment_verify(int d, int n_samples, std::uint64_t seed) {
    if (d < 2 || d > 16) throw UnsupportedError("haar_moment_verify expects 2 <= d <= 16");
    if (n_samples < 1000)
        throw InsufficientDataError("haar_moment_verify needs >= 1000 samples");

    RngStream fixed(stream_seed(seed, 0xF1));
    const Eigen::MatrixXcd a = gaussian_matrix(d, fixed);
    const Eigen::MatrixXcd b = gaussian_matrix(d, fixed);
    const Eigen::MatrixXcd c = gaussian_matrix(d, fixed);
    const Eigen::MatrixXcd dd = gaussian_matrix(d, fixed);

    Eigen::MatrixXcd first_sum = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXd first_sq = Eigen::MatrixXd::Zero(d, d);
    Complex second_sum(0.0, 0.0);
    double second_sq = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        RngStream rng(stream_seed(seed, static_cast<std::uint64_t>(s), 1));
        const Eigen::MatrixXcd u = haar_unitary(d, rng);
        const Eigen::MatrixXcd uau = u * a * u.adjoint();
        first_sum += uau;
        first_sq += uau.cwiseAbs2();
        const Complex val = (uau * b).trace() * (u * c * u.adjoint() * dd).trace();
        second_sum += val;
        second_sq += std::norm(val);
    }

    HaarMomentReport rep;
    rep.n_samples = n_samples;
    const Eigen::MatrixXcd mean = first_sum / static_cast<double>(n_samples);
    Eigen::MatrixXcd target = Eigen::MatrixXcd::Zero(d, d);
    target.diagonal().setConstant(a.trace() / static_cast<double>(d));
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            const double var =
                std::max(first_sq(i, j) / n_samples - std::norm(mean(i, j)), 1e-300);
            const double se = std::sqrt(var / n_samples);
            rep.first_moment_max_se =
                std::max(rep.first_moment_max_se, std::abs(mean(i, j) - target(i, j)) / se);
        }
    }
    const Complex mc = second_sum / static_cast<double>(n_samples);
    const double var = std::max(second_sq / n_samples - std::norm(mc), 1e-300);
    const double se = std::sqrt(var / n_samples);
    rep.second_moment_mc = mc.real();
    rep.second_moment_analytic = haar_second_moment(a, b, c, dd).real();
    rep.second_moment_dev_se = std::abs(mc - haar_second_moment(a, b, c, dd)) / se;
    return rep;
}

SecondMomentReport equilibrium_second_moment_check(const Eigen::VectorXcd& c_energy,
                                                   const Eigen::MatrixXcd& a_energy,
                                                   const WindowPartition& part,
                                                   const Spectrum& spec, std::uint64_t master_seed,
                                                   int n_samples, int threads) {
    if (n_samples < 2)
        throw InsufficientDataError("equilibrium_second_moment_check needs >= 2 samples");
    SecondMomentReport rep;
    rep.samples.resize(n_samples);
    rep.min_window_dim = part.min_dim();
    parallel_for(n_samples, threads, [&](int s) {
        const BlockUnitary u =
            sample_block_unitary(part, master_seed, static_cast<std::uint64_t>(s));
        double val = 0.0;
        for (int k = 0; k < u.count(); ++k) {
            const auto [b, e] = u.range[k];
            const int d = e - b;
            const Eigen::VectorXcd a = u.blocks[k].adjoint() * c_energy.segment(b, d);
            const Eigen::MatrixXcd rotated_a =
                u.blocks[k].adjoint() * a_energy.block(b, b, d, d) * u.blocks[k];
            for (const auto& [cb, ce] : classes_in_window(spec, b, e)) {
                const Eigen::VectorXcd seg = a.segment(cb - b, ce - cb);
                val += seg.dot(rotated_a.block(cb - b, cb - b, ce - cb, ce - cb) * seg).real();
            }
        }
        rep.samples(s) = val;
    });
    rep.mean = rep.samples.mean();
    rep.variance = (rep.samples.array() - rep.mean).square().sum() / (n_samples - 1.0);
    rep.variance_times_dmin = rep.variance * rep.min_window_dim;
    return rep;
}

}  // namespace thermalab

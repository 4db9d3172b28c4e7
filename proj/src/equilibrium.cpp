#include "thermalab/equilibrium.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "thermalab/errors.hpp"
#include "thermalab/microcanonical.hpp"
#include "thermalab/parallel.hpp"

namespace thermalab {

namespace {

// Degeneracy classes clipped to [begin, end), as in-window offsets.
std::vector<std::pair<int, int>> window_classes(const Spectrum& spec, int begin, int end) {
    auto out = classes_in_window(spec, begin, end);
    for (auto& [cb, ce] : out) {
        cb -= begin;
        ce -= begin;
    }
    return out;
}

// Kills elements outside the class-diagonal blocks of a window-sized matrix.
void pinch_in_place(Eigen::MatrixXcd& block, const std::vector<std::pair<int, int>>& classes) {
    const int d = static_cast<int>(block.rows());
    std::vector<int> class_id(d, -1);
    for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
        for (int i = classes[c].first; i < classes[c].second; ++i) class_id[i] = c;
    }
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) {
            if (class_id[i] != class_id[j]) block(i, j) = Complex(0.0, 0.0);
        }
    }
}

// Columns {Pi_c a} over the window's classes: the rank-one-per-class factor
// of the pinched pure block, sum_c (Pi_c a)(Pi_c a)^dagger.
Eigen::MatrixXcd class_masked_columns(const Eigen::VectorXcd& a,
                                      const std::vector<std::pair<int, int>>& classes) {
    Eigen::MatrixXcd l = Eigen::MatrixXcd::Zero(a.size(), static_cast<long>(classes.size()));
    for (int c = 0; c < static_cast<int>(classes.size()); ++c) {
        const auto [cb, ce] = classes[c];
        l.col(c).segment(cb, ce - cb) = a.segment(cb, ce - cb);
    }
    return l;
}

}  // namespace

DensityMatrix dephase(const DensityMatrix& rho_energy, const Spectrum& spec) {
    if (rho_energy.basis != Basis::Energy) {
        throw BasisMismatchError("dephase expects an energy-basis density matrix");
    }
    if (rho_energy.mat.rows() != spec.dim()) {
        throw BasisMismatchError("dephase: dimension mismatch with spectrum");
    }
    DensityMatrix out{Eigen::MatrixXcd::Zero(spec.dim(), spec.dim()), Basis::Energy};
    for (const auto& [cb, ce] : spec.classes) {
        const int m = ce - cb;
        out.mat.block(cb, cb, m, m) = rho_energy.mat.block(cb, cb, m, m);
    }
    return out;
}

DensityMatrix equilibrium_state(const DensityMatrix& rho_energy, const BlockUnitary& u,
                                const Spectrum& spec) {
    if (rho_energy.basis != Basis::Energy) {
        throw BasisMismatchError("equilibrium_state expects an energy-basis density matrix");
    }
    if (rho_energy.mat.rows() != spec.dim() || u.dim() != spec.dim()) {
        throw BasisMismatchError("equilibrium_state: dimension mismatch");
    }
    DensityMatrix out{Eigen::MatrixXcd::Zero(spec.dim(), spec.dim()), Basis::Energy};
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        const int d = e - b;
        Eigen::MatrixXcd rotated =
            u.blocks[k].adjoint() * rho_energy.mat.block(b, b, d, d) * u.blocks[k];
        pinch_in_place(rotated, window_classes(spec, b, e));
        out.mat.block(b, b, d, d) = u.blocks[k] * rotated * u.blocks[k].adjoint();
    }
    return out;
}

DensityMatrix equilibrium_state(const Eigen::VectorXcd& c_energy, const BlockUnitary& u,
                                const Spectrum& spec) {
    if (c_energy.size() != spec.dim() || u.dim() != spec.dim()) {
        throw BasisMismatchError("equilibrium_state: dimension mismatch");
    }
    DensityMatrix out{Eigen::MatrixXcd::Zero(spec.dim(), spec.dim()), Basis::Energy};
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        const int d = e - b;
        const Eigen::VectorXcd a = u.blocks[k].adjoint() * c_energy.segment(b, d);
        const Eigen::MatrixXcd l =
            u.blocks[k] * class_masked_columns(a, window_classes(spec, b, e));
        out.mat.block(b, b, d, d) = l * l.adjoint();
    }
    return out;
}

DensityMatrix equilibrium_state_rotated(const Eigen::VectorXcd& c_energy, const BlockUnitary& u,
                                        const Spectrum& spec) {
    if (c_energy.size() != spec.dim() || u.dim() != spec.dim()) {
        throw BasisMismatchError("equilibrium_state_rotated: dimension mismatch");
    }
    DensityMatrix out{Eigen::MatrixXcd::Zero(spec.dim(), spec.dim()), Basis::Energy};
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        const int d = e - b;
        const Eigen::VectorXcd a = u.blocks[k].adjoint() * c_energy.segment(b, d);
        const Eigen::MatrixXcd l = class_masked_columns(a, window_classes(spec, b, e));
        out.mat.block(b, b, d, d) = l * l.adjoint();
    }
    return out;
}

FactoredDensity equilibrium_factored(const Eigen::VectorXcd& c_energy, const BlockUnitary& u,
                                     const Spectrum& spec) {
    if (c_energy.size() != spec.dim() || u.dim() != spec.dim()) {
        throw BasisMismatchError("equilibrium_factored: dimension mismatch");
    }
    const long dim = spec.dim();
    const long n_cols = static_cast<long>(spec.classes.size());
    FactoredDensity out{Eigen::MatrixXcd::Zero(dim, n_cols)};
    long col = 0;
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        const int d = e - b;
        const Eigen::VectorXcd a = u.blocks[k].adjoint() * c_energy.segment(b, d);
        const auto classes = window_classes(spec, b, e);
        const Eigen::MatrixXcd l = u.blocks[k] * class_masked_columns(a, classes);
        out.cols.middleCols(col, l.cols()) = spec.vectors.middleCols(b, d) * l;
        col += l.cols();
    }
    return out;
}

FactoredDensity gibbs_factored(const GibbsState& g, const Spectrum& spec) {
    if (g.weights.size() != spec.dim()) {
        throw BasisMismatchError("gibbs_factored: dimension mismatch");
    }
    FactoredDensity out{spec.vectors};
    const Eigen::VectorXd root = g.weights.cwiseMax(0.0).cwiseSqrt();
    out.cols = out.cols * root.asDiagonal();
    return out;
}

FactoredDensity rotated_gibbs_factored(const GibbsState& g, const Spectrum& spec,
                                       const BlockUnitary& u) {
    if (g.weights.size() != spec.dim() || u.dim() != spec.dim()) {
        throw BasisMismatchError("rotated_gibbs_factored: dimension mismatch");
    }
    FactoredDensity out{Eigen::MatrixXcd::Zero(spec.dim(), spec.dim())};
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        const int d = e - b;
        const Eigen::VectorXd root = g.weights.segment(b, d).cwiseMax(0.0).cwiseSqrt();
        out.cols.middleCols(b, d) =
            spec.vectors.middleCols(b, d) * (u.blocks[k] * root.asDiagonal());
    }
    return out;
}

std::pair<double, double> window_twirl_coefficients(const WindowPartition& part,
                                                    const Spectrum& spec, int k) {
    const auto [b, e] = part.range[k];
    const double d = static_cast<double>(e - b);
    if (e - b == 1) return {1.0, 0.0};  // a single level is left untouched
    double a = 0.0, bb = 0.0;
    for (const auto& [cb, ce] : window_classes(spec, b, e)) {
        const double m = static_cast<double>(ce - cb);
        a += (m * m - m / d) / (d * d - 1.0);
        bb += (m - m * m / d) / (d * d - 1.0);
    }
    return {a, bb};
}

DensityMatrix ensemble_average_equilibrium(const Eigen::VectorXcd& c_energy,
                                           const WindowPartition& part, const Spectrum& spec) {
    if (c_energy.size() != spec.dim()) {
        throw BasisMismatchError("ensemble_average_equilibrium: dimension mismatch");
    }
    DensityMatrix out{Eigen::MatrixXcd::Zero(spec.dim(), spec.dim()), Basis::Energy};
    for (int k = 0; k < part.count(); ++k) {
        const auto [b, e] = part.range[k];
        const int d = e - b;
        const Eigen::VectorXcd seg = c_energy.segment(b, d);
        const double q = seg.squaredNorm();
        const auto [ca, cb] = window_twirl_coefficients(part, spec, k);
        out.mat.block(b, b, d, d) = ca * (seg * seg.adjoint());
        out.mat.block(b, b, d, d).diagonal().array() += Complex(cb * q, 0.0);
    }
    return out;
}

ParticipationStats participation_statistics(const Eigen::VectorXcd& c_energy,
                                            const WindowPartition& part, const Spectrum& spec,
                                            std::uint64_t master_seed, int n_samples,
                                            int threads) {
    if (n_samples < 2) throw InsufficientDataError("participation_statistics needs >= 2 samples");
    const int n_windows = part.count();
    const Eigen::VectorXd q = window_weights(c_energy, part);

    ParticipationStats stats;
    stats.purity_samples.resize(n_samples);
    // For a fixed window, U^dagger c restricted to it is sqrt(q_k) times a
    // Haar-random unit vector, so the purity of the dephased state can be
    // sampled without materializing unitaries.
    parallel_for(n_samples, threads, [&](int s) {
        double purity = 0.0;
        for (int k = 0; k < n_windows; ++k) {
            const auto [b, e] = part.range[k];
            const int d = e - b;
            RngStream rng(stream_seed(master_seed, static_cast<std::uint64_t>(s),
                                      static_cast<std::uint64_t>(k)));
            Eigen::VectorXcd a(d);
            for (int i = 0; i < d; ++i) a(i) = rng.gaussian_complex();
            a *= std::sqrt(q(k)) / a.norm();
            for (const auto& [cb, ce] : window_classes(spec, b, e)) {
                purity += std::pow(a.segment(cb, ce - cb).squaredNorm(), 2);
            }
        }
        stats.purity_samples(s) = purity;
    });

    stats.mean = stats.purity_samples.mean();
    const double var =
        (stats.purity_samples.array() - stats.mean).square().sum() / (n_samples - 1.0);
    stats.std_error = std::sqrt(var / n_samples);
    for (int k = 0; k < n_windows; ++k) {
        const double d = static_cast<double>(part.dim(k));
        stats.analytic += 2.0 * q(k) * q(k) / (d + 1.0);
        stats.analytic_draft += q(k) * q(k) / (d + 1.0);
    }
    return stats;
}

std::vector<DeficitSample> entropy_deficit_samples(const Eigen::VectorXcd& c_energy,
                                                   const WindowPartition& part,
                                                   const Spectrum& spec, double e_center,
                                                   double delta_big, std::uint64_t master_seed,
                                                   int n_samples, int threads) {
    if (n_samples < 1) throw InsufficientDataError("entropy_deficit_samples needs >= 1 sample");
    const AgmeInterval interval = agme_interval(part, e_center, delta_big);

    // Window weights are invariant under the block rotation, so p_Delta is
    // sample independent; only the in-window entropies fluctuate.
    const Eigen::VectorXd q = window_weights(c_energy, part);
    double p_delta = 0.0;
    for (int k : interval.windows) p_delta += q(k);
    if (p_delta <= 0.0)
        throw std::invalid_argument("no state weight inside the Delta interval");

    // For a pure input the pinched window block is sum_c (Pi_c a)(Pi_c a)^+,
    // whose only non-zero eigenvalue per class is the class mass |Pi_c a|^2.
    // The deficit therefore needs class masses, never dense matrices; the
    // decompose_agme route reproduces these numbers and is cross-checked in
    // the tests.
    std::vector<DeficitSample> out(n_samples);
    parallel_for(n_samples, threads, [&](int s) {
        const BlockUnitary u =
            sample_block_unitary(part, master_seed, static_cast<std::uint64_t>(s));
        double eta_nats = 0.0;
        for (int k : interval.windows) {
            if (q(k) <= 0.0) continue;
            const auto [b, e] = part.range[k];
            const int d = e - b;
            const Eigen::VectorXcd a = u.blocks[k].adjoint() * c_energy.segment(b, d);
            double entropy = 0.0;
            for (const auto& [cb, ce] : window_classes(spec, b, e)) {
                const double p = a.segment(cb, ce - cb).squaredNorm() / q(k);
                if (p > 0.0) entropy -= p * std::log(p);
            }
            eta_nats += q(k) / p_delta * (std::log(static_cast<double>(d)) - entropy);
        }
        out[s] = DeficitSample{eta_nats / std::log(2.0), eta_nats, p_delta};
    });
    return out;
}

std::vector<EnergyTailRow> energy_tail_report(const Eigen::VectorXd& weights,
                                              const Spectrum& spec,
                                              const std::vector<double>& thresholds, double offset,
                                              double width_scale, int n_sites) {
    if (weights.size() != spec.dim()) {
        throw BasisMismatchError("energy_tail_report: dimension mismatch");
    }
    if (width_scale <= 0.0 || n_sites < 1) {
        throw std::invalid_argument("energy_tail_report: bad width scale or site count");
    }
    const double n = static_cast<double>(n_sites);
    std::vector<EnergyTailRow> rows;
    rows.reserve(thresholds.size());
    for (double thr : thresholds) {
        EnergyTailRow row;
        row.threshold = thr;
        for (long nu = spec.dim() - 1; nu >= 0 && spec.energies(nu) >= thr; --nu) {
            row.tail_weight += weights(nu);
        }
        row.eta = thr / n - offset;
        row.bound = std::exp(-2.0 * row.eta * row.eta * n / (width_scale * width_scale));
        row.exceeds_bound = row.tail_weight > row.bound;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace thermalab

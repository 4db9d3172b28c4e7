#include "thermalab/microcanonical.hpp"

#include <cmath>
#include <stdexcept>

#include "thermalab/errors.hpp"

namespace thermalab {

DensityMatrix microcanonical_state(const WindowPartition& part, int k, long dim) {
    if (k < 0 || k >= part.count()) throw std::invalid_argument("window index out of range");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const auto [b, e] = part.range[k];
    for (int i = b; i < e; ++i) m(i, i) = 1.0 / static_cast<double>(e - b);
    return {m, Basis::Energy};
}

DensityMatrix gme_state(const WindowPartition& part, const Eigen::VectorXd& q, long dim) {
    if (q.size() != part.count())
        throw std::invalid_argument("weight vector does not match the partition");
    if (q.minCoeff() < -1e-12) throw std::invalid_argument("window weights must be non-negative");
    if (std::abs(q.sum() - 1.0) > 1e-9) throw std::invalid_argument("window weights must sum to one");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < part.count(); ++k) {
        const auto [b, e] = part.range[k];
        for (int i = b; i < e; ++i) m(i, i) = q[k] / static_cast<double>(e - b);
    }
    return {m, Basis::Energy};
}

AgmeInterval agme_interval(const WindowPartition& part, double e_center, double delta_big) {
    const double delta = part.nominal_width;
    const double ratio = delta_big / delta;
    if (delta_big <= 0.0 || std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("Delta must be a positive integer multiple of the window width");

    AgmeInterval out;
    const double m_snap = std::round((e_center - part.anchor) / delta);
    out.center = part.anchor + m_snap * delta;

    const double i_lo = out.center - delta_big;
    const double i_hi = out.center + delta_big;
    const double tol = 1e-9 * delta;
    for (int k = 0; k < part.count(); ++k)
        if (part.lo[k] >= i_lo - tol && part.hi[k] <= i_hi + tol) out.windows.push_back(k);
    return out;
}

GmeDecomposition decompose_agme(const DensityMatrix& rho_energy, const Spectrum& spec,
                                const WindowPartition& part, double e_center, double delta_big) {
    if (rho_energy.basis != Basis::Energy)
        throw BasisMismatchError("decompose_agme expects an energy-basis state");
    const long dim = spec.dim();
    if (rho_energy.mat.rows() != dim) throw std::invalid_argument("state dimension mismatch");

    const AgmeInterval interval = agme_interval(part, e_center, delta_big);

    // Off-block residue: the state must be diagonal in the energy basis up
    // to degeneracy-class blocks.
    std::vector<int> class_id(dim);
    for (size_t c = 0; c < spec.classes.size(); ++c)
        for (int i = spec.classes[c].first; i < spec.classes[c].second; ++i)
            class_id[i] = static_cast<int>(c);
    double off = 0.0;
    for (long j = 0; j < dim; ++j)
        for (long i = 0; i < dim; ++i)
            if (class_id[i] != class_id[j]) off = std::max(off, std::abs(rho_energy.mat(i, j)));
    if (off > 1e-10)
        throw std::invalid_argument("state has off-diagonal energy-basis residue above 1e-10");

    GmeDecomposition out;
    out.half_width = delta_big;
    out.center = interval.center;
    out.windows = interval.windows;

    Eigen::VectorXd raw_q(part.count());
    std::vector<double> q_in;
    for (int k = 0; k < part.count(); ++k) {
        const auto [b, e] = part.range[k];
        double w = 0.0;
        for (int i = b; i < e; ++i) w += rho_energy.mat(i, i).real();
        raw_q[k] = w;
    }
    for (int k : out.windows) q_in.push_back(raw_q[k]);

    out.p_delta = 0.0;
    for (double w : q_in) out.p_delta += w;
    out.tail_weight = std::max(0.0, raw_q.sum() - out.p_delta);
    if (out.p_delta <= 0.0)
        throw std::invalid_argument("no state weight inside the Delta interval");

    out.q.resize(out.windows.size());
    out.window_entropy.resize(out.windows.size());
    out.eta_nats = 0.0;
    for (size_t wi = 0; wi < out.windows.size(); ++wi) {
        const int k = out.windows[wi];
        const auto [b, e] = part.range[k];
        const int d = static_cast<int>(e - b);
        out.q[wi] = q_in[wi] / out.p_delta;
        double s = 0.0;
        if (q_in[wi] > 0.0) {
            // Entropy of the renormalized window block from its class-block
            // eigenvalues; singleton classes contribute their diagonal entry
            // directly, so nondegenerate spectra never hit the eigensolver.
            for (const auto& [cb, ce] : spec.classes) {
                if (cb < b || ce > e) continue;
                if (ce - cb == 1) {
                    const double p = rho_energy.mat(cb, cb).real() / q_in[wi];
                    if (p > 0.0) s -= p * std::log(p);
                    continue;
                }
                const Eigen::MatrixXcd sub =
                    rho_energy.mat.block(cb, cb, ce - cb, ce - cb) / q_in[wi];
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((sub + sub.adjoint()) / 2.0,
                                                                   Eigen::EigenvaluesOnly);
                for (int i = 0; i < es.eigenvalues().size(); ++i) {
                    const double p = es.eigenvalues()[i];
                    if (p > 0.0) s -= p * std::log(p);
                }
            }
        }
        out.window_entropy[wi] = s;
        out.eta_nats += out.q[wi] * (std::log(static_cast<double>(d)) - s);
    }
    out.eta_bits = out.eta_nats / std::log(2.0);
    return out;
}

}  // namespace thermalab

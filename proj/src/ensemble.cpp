#include "thermalab/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "thermalab/parallel.hpp"

namespace thermalab {

long BlockUnitary::dim() const {
    return range.empty() ? 0 : range.back().second;
}

Eigen::MatrixXcd haar_unitary(int d, RngStream& rng) {
    if (d < 1) throw std::invalid_argument("unitary dimension must be >= 1");
    Eigen::MatrixXcd g(d, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < d; ++i) g(i, j) = rng.gaussian_complex();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(d, d);
    // Fix the gauge freedom: multiplying by the R-diagonal phases makes the
    // factorization unique and the Q factor exactly Haar.
    for (int j = 0; j < d; ++j) {
        const Complex r = qr.matrixQR()(j, j);
        const double m = std::abs(r);
        if (m > 0.0) q.col(j) *= r / m;
    }
    return q;
}

BlockUnitary sample_block_unitary(const WindowPartition& part, std::uint64_t master_seed,
                                  std::uint64_t sample_index) {
    BlockUnitary u;
    u.master_seed = master_seed;
    u.sample_index = sample_index;
    u.range = part.range;
    u.blocks.resize(part.count());
    for (int k = 0; k < part.count(); ++k) {
        RngStream rng(stream_seed(master_seed, sample_index, static_cast<std::uint64_t>(k)));
        u.blocks[k] = haar_unitary(part.dim(k), rng);
    }
    return u;
}

double unitarity_residual(const BlockUnitary& u) {
    double worst = 0.0;
    for (const auto& b : u.blocks) {
        const long d = b.rows();
        worst = std::max(worst,
                         (b.adjoint() * b - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff());
    }
    return worst;
}

Eigen::VectorXcd apply_block_unitary(const BlockUnitary& u, const Eigen::VectorXcd& c_energy,
                                     bool adjoint) {
    if (c_energy.size() != u.dim()) throw std::invalid_argument("vector dimension mismatch");
    Eigen::VectorXcd out(c_energy.size());
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        if (adjoint)
            out.segment(b, e - b) = u.blocks[k].adjoint() * c_energy.segment(b, e - b);
        else
            out.segment(b, e - b) = u.blocks[k] * c_energy.segment(b, e - b);
    }
    return out;
}

Eigen::MatrixXcd conjugate_energy_operator(const BlockUnitary& u, const Eigen::MatrixXcd& a) {
    if (a.rows() != u.dim() || a.cols() != u.dim())
        throw std::invalid_argument("operator dimension mismatch");
    Eigen::MatrixXcd tmp(a.rows(), a.cols());
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        tmp.middleRows(b, e - b) = u.blocks[k] * a.middleRows(b, e - b);
    }
    Eigen::MatrixXcd out(a.rows(), a.cols());
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        out.middleCols(b, e - b) = tmp.middleCols(b, e - b) * u.blocks[k].adjoint();
    }
    return out;
}

ConjugatedHamiltonian conjugate_hamiltonian(const Spectrum& spec, const BlockUnitary& u) {
    const long dim = spec.dim();
    if (u.dim() != dim) throw std::invalid_argument("block unitary does not match the spectrum");

    ConjugatedHamiltonian out;
    // T = V * (U Lambda U^dagger) built window by window, then H' = T V^dagger.
    Eigen::MatrixXcd t(dim, dim);
    double worst = 0.0;
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        const int d = static_cast<int>(e - b);
        const Eigen::VectorXd lam = spec.energies.segment(b, d);
        Eigen::MatrixXcd m = u.blocks[k] * lam.asDiagonal() * u.blocks[k].adjoint();
        m = (m + m.adjoint()) / 2.0;
        Eigen::MatrixXcd diff = m;
        diff.diagonal() -= lam.cast<Complex>();
        worst = std::max(worst, operator_norm(diff));
        t.middleCols(b, d).noalias() = spec.vectors.middleCols(b, d) * m;
    }
    out.op_norm_diff = worst;
    out.matrix.noalias() = t * spec.vectors.adjoint();
    out.matrix = (out.matrix + out.matrix.adjoint()) / 2.0;
    return out;
}

EnergyConcentration mc_energy_concentration(const Spectrum& spec, const WindowPartition& part,
                                            const Eigen::VectorXcd& c_energy,
                                            std::uint64_t master_seed, int n_samples,
                                            int threads) {
    if (n_samples < 1) throw std::invalid_argument("need at least one sample");
    EnergyConcentration out;
    out.n_samples = n_samples;
    out.hard_bound = part.max_width();
    out.state_energy = c_energy.cwiseAbs2().dot(spec.energies);

    Eigen::VectorXd shifts(n_samples);
    parallel_for(n_samples, threads, [&](int s) {
        const BlockUnitary u =
            sample_block_unitary(part, master_seed, static_cast<std::uint64_t>(s));
        const Eigen::VectorXcd rotated = apply_block_unitary(u, c_energy, /*adjoint=*/false);
        shifts[s] = rotated.cwiseAbs2().dot(spec.energies) - out.state_energy;
    });

    out.mean_shift = shifts.mean();
    out.max_abs_shift = shifts.cwiseAbs().maxCoeff();
    const double var = (shifts.array() - out.mean_shift).square().sum() /
                       std::max(1, n_samples - 1);
    out.sample_std = std::sqrt(var);
    out.hard_bound_ok = out.max_abs_shift <= out.hard_bound + 1e-9;
    return out;
}

}  // namespace thermalab

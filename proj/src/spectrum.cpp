#include "thermalab/spectrum.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>

#include "thermalab/errors.hpp"

namespace thermalab {

Spectrum diagonalize(const Eigen::MatrixXcd& h, double degeneracy_rel_tol) {
    if (h.rows() != h.cols() || h.rows() == 0)
        throw std::invalid_argument("diagonalize expects a square matrix");
    if (hermiticity_residual(h) > 1e-12)
        throw std::invalid_argument("diagonalize expects a Hermitian matrix (1e-12 relative)");

    const lapack_int n = static_cast<lapack_int>(h.rows());
    Spectrum out;
    out.vectors = (h + h.adjoint()) / 2.0;
    out.energies.resize(n);
    const lapack_int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n, out.energies.data());
    if (info != 0) throw NonConvergenceError("zheevd failed to converge");

    for (lapack_int i = 0; i + 1 < n; ++i) {
        if (out.energies[i] > out.energies[i + 1])
            throw NonConvergenceError("eigenvalues not ascending");
    }

    // Deterministic phase: largest-magnitude entry real positive.
    for (lapack_int j = 0; j < n; ++j) {
        int arg = 0;
        double best = -1.0;
        for (lapack_int i = 0; i < n; ++i) {
            // strict comparison keeps the lowest index on exact ties
            const double m = std::abs(out.vectors(i, j));
            if (m > best) {
                best = m;
                arg = i;
            }
        }
        const Complex v = out.vectors(arg, j);
        if (std::abs(v) > 0.0) out.vectors.col(j) *= std::conj(v) / std::abs(v);
    }

    const double scale = std::max(1.0, out.energies.cwiseAbs().maxCoeff());
    double worst = 0.0;
    for (lapack_int j = 0; j < n; ++j) {
        const double r =
            (h * out.vectors.col(j) - out.energies[j] * out.vectors.col(j)).norm() / scale;
        worst = std::max(worst, r);
    }
    out.max_residual = worst;
    if (worst > 1e-10) throw NonConvergenceError("eigenpair residual above 1e-10");

    out.ortho_residual =
        (out.vectors.adjoint() * out.vectors - Eigen::MatrixXcd::Identity(n, n))
            .cwiseAbs()
            .maxCoeff();
    if (out.ortho_residual > 1e-10) throw NonConvergenceError("eigenbasis lost orthonormality");

    out.classes = degeneracy_classes(out.energies, degeneracy_rel_tol);
    return out;
}

std::vector<std::pair<int, int>> degeneracy_classes(const Eigen::VectorXd& energies,
                                                    double rel_tol) {
    if (energies.size() == 0) return {};
    const double scale = std::max(1.0, energies.cwiseAbs().maxCoeff());
    const double tol = rel_tol * scale;
    std::vector<std::pair<int, int>> classes;
    int begin = 0;
    for (int i = 1; i < energies.size(); ++i) {
        if (energies[i] - energies[i - 1] > tol) {
            classes.push_back({begin, i});
            begin = i;
        }
    }
    classes.push_back({begin, static_cast<int>(energies.size())});
    return classes;
}

StateVector to_energy_basis(const StateVector& s, const Spectrum& spec) {
    if (s.basis != Basis::Computational)
        throw BasisMismatchError("state is not in the computational basis");
    return {spec.vectors.adjoint() * s.vec, Basis::Energy};
}

StateVector to_computational(const StateVector& s, const Spectrum& spec) {
    if (s.basis != Basis::Energy) throw BasisMismatchError("state is not in the energy basis");
    return {spec.vectors * s.vec, Basis::Computational};
}

DensityMatrix to_energy_basis(const DensityMatrix& r, const Spectrum& spec) {
    if (r.basis != Basis::Computational)
        throw BasisMismatchError("operator is not in the computational basis");
    return {spec.vectors.adjoint() * r.mat * spec.vectors, Basis::Energy};
}

DensityMatrix to_computational(const DensityMatrix& r, const Spectrum& spec) {
    if (r.basis != Basis::Energy) throw BasisMismatchError("operator is not in the energy basis");
    return {spec.vectors * r.mat * spec.vectors.adjoint(), Basis::Computational};
}

double von_neumann_entropy(const DensityMatrix& rho) {
    if (hermiticity_residual(rho.mat) > 1e-9)
        throw std::invalid_argument("entropy input is not Hermitian");
    const double tr = rho.mat.trace().real();
    if (std::abs(tr - 1.0) > 1e-9)
        throw std::invalid_argument("entropy input must have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((rho.mat + rho.mat.adjoint()) / 2.0,
                                                       Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p < -1e-10) throw std::invalid_argument("entropy input is not positive semidefinite");
        if (p > 0.0) s -= p * std::log(p);
    }
    return s;
}

}  // namespace thermalab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "thermalab/ensemble.hpp"
#include "thermalab/hamiltonian.hpp"
#include "thermalab/spectrum.hpp"

using namespace thermalab;

namespace {

// Embeds the block unitary as a dense matrix; baseline for the block-wise
// operator routines.
Eigen::MatrixXcd dense_unitary(const BlockUnitary& u) {
    const long dim = u.dim();
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < u.count(); ++k) {
        const auto [b, e] = u.range[k];
        full.block(b, b, e - b, e - b) = u.blocks[k];
    }
    return full;
}

}  // namespace

TEST_CASE("haar_unitary: unitarity and determinism") {
    RngStream rng(5);
    const Eigen::MatrixXcd u = haar_unitary(6, rng);
    CHECK((u * u.adjoint() - Eigen::MatrixXcd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-13);

    RngStream r1(99), r2(99);
    CHECK((haar_unitary(4, r1) - haar_unitary(4, r2)).norm() == 0.0);
}

TEST_CASE("haar_unitary: |u00|^2 is uniform on [0,1] for d = 2") {
    // For Haar on U(2) the squared first entry is exactly Uniform(0,1);
    // a Kolmogorov-Smirnov check with a generous critical value.
    const int n = 2000;
    std::vector<double> xs;
    RngStream rng(31);
    for (int i = 0; i < n; ++i) xs.push_back(std::norm(haar_unitary(2, rng)(0, 0)));
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        ks = std::max(ks, std::abs(xs[i] - (i + 1.0) / n));
        ks = std::max(ks, std::abs(xs[i] - static_cast<double>(i) / n));
    }
    CHECK(ks < 2.5 / std::sqrt(static_cast<double>(n)));  // ~0.056
}

TEST_CASE("haar_unitary: phase distribution is not QR-biased") {
    // Without the R-diagonal correction, eigenvalue phases of QR samples
    // cluster; the corrected sampler must give a flat mean phase.
    const int n = 3000;
    double mean_re = 0.0, mean_im = 0.0;
    RngStream rng(77);
    for (int i = 0; i < n; ++i) {
        const Complex t = haar_unitary(3, rng).trace() / 3.0;
        mean_re += t.real() / n;
        mean_im += t.imag() / n;
    }
    // E[tr U / d] = 0 for Haar; sample mean has sd ~ 1/(d sqrt(n)) ~ 0.006.
    CHECK(std::abs(mean_re) < 0.03);
    CHECK(std::abs(mean_im) < 0.03);
}

TEST_CASE("block sampler: shapes, unitarity, seeding") {
    const Spectrum s = testsupport::explicit_spectrum({0.0, 0.1, 0.2, 0.8, 0.9, 1.7});
    const WindowPartition p = partition_spectrum(s, 0.5);
    REQUIRE(p.count() == 3);

    const BlockUnitary u = sample_block_unitary(p, 42, 0);
    CHECK(u.count() == 3);
    CHECK(u.dim() == 6);
    for (int k = 0; k < 3; ++k) CHECK(u.blocks[k].rows() == p.dim(k));
    CHECK(unitarity_residual(u) < 1e-12);

    const BlockUnitary u2 = sample_block_unitary(p, 42, 0);
    const BlockUnitary u3 = sample_block_unitary(p, 42, 1);
    CHECK((dense_unitary(u) - dense_unitary(u2)).norm() == 0.0);
    CHECK((dense_unitary(u) - dense_unitary(u3)).norm() > 0.1);
}

TEST_CASE("apply_block_unitary matches the dense product and inverts") {
    const Spectrum s = testsupport::explicit_spectrum({0.0, 0.1, 0.2, 0.8, 0.9, 1.7});
    const WindowPartition p = partition_spectrum(s, 0.5);
    const BlockUnitary u = sample_block_unitary(p, 7, 3);
    const Eigen::MatrixXcd full = dense_unitary(u);
    const Eigen::VectorXcd c = testsupport::random_state(6, 8);

    const Eigen::VectorXcd uc = apply_block_unitary(u, c);
    CHECK((uc - full * c).norm() < 1e-13);
    CHECK(uc.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((apply_block_unitary(u, uc, /*adjoint=*/true) - c).norm() < 1e-12);

    const Eigen::MatrixXcd a = testsupport::random_hermitian(6, 9);
    CHECK((conjugate_energy_operator(u, a) - full * a * full.adjoint()).cwiseAbs().maxCoeff() <
          1e-12);
}

TEST_CASE("conjugated Hamiltonian: same spectrum, bounded norm shift") {
    const auto ham = build_hamiltonian(testsupport::ising_chain(6, Boundary::Periodic));
    const Spectrum s = diagonalize(ham.matrix);
    const WindowPartition p = partition_spectrum(s, 1.0);

    const BlockUnitary u = sample_block_unitary(p, 11, 0);
    const ConjugatedHamiltonian ch = conjugate_hamiltonian(s, u);

    // Exact same eigenvalues after independent re-diagonalization.
    const Spectrum s2 = diagonalize(ch.matrix);
    const double scale = std::max(1.0, s.energies.cwiseAbs().maxCoeff());
    CHECK((s2.energies - s.energies).cwiseAbs().maxCoeff() / scale < 1e-10);

    // The recorded block-wise norm equals the dense operator norm.
    CHECK(ch.op_norm_diff ==
          doctest::Approx(operator_norm(ham.matrix - ch.matrix)).epsilon(1e-8));
    CHECK(ch.op_norm_diff <= p.max_width() + 1e-9);
}

TEST_CASE("identity blocks leave the Hamiltonian untouched") {
    const auto ham = build_hamiltonian(testsupport::ising_chain(4, Boundary::Open));
    const Spectrum s = diagonalize(ham.matrix);
    const WindowPartition p = partition_spectrum(s, 2.0);
    BlockUnitary u;
    u.range = p.range;
    for (int k = 0; k < p.count(); ++k)
        u.blocks.push_back(Eigen::MatrixXcd::Identity(p.dim(k), p.dim(k)));
    const ConjugatedHamiltonian ch = conjugate_hamiltonian(s, u);
    CHECK((ch.matrix - ham.matrix).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(ch.op_norm_diff < 1e-10);
}

TEST_CASE("energy concentration: hard window bound always holds") {
    const ModelSpec model = testsupport::ising_chain(6, Boundary::Periodic);
    const auto ham = build_hamiltonian(model);
    const Spectrum s = diagonalize(ham.matrix);
    const WindowPartition p = partition_spectrum(s, 1.5);
    const Eigen::VectorXcd c =
        s.vectors.adjoint() *
        bloch_product_state(model.lattice, 1.5707963267948966, 1.5707963267948966);

    const EnergyConcentration ec = mc_energy_concentration(s, p, c, 2024, 60);
    CHECK(ec.hard_bound == doctest::Approx(p.max_width()));
    CHECK(ec.hard_bound_ok);
    CHECK(ec.max_abs_shift <= ec.hard_bound + 1e-9);
    CHECK(std::abs(ec.mean_shift) <= ec.max_abs_shift + 1e-15);
    CHECK(ec.n_samples == 60);

    // Thread count must not change the outcome.
    const EnergyConcentration ec3 = mc_energy_concentration(s, p, c, 2024, 60, 3);
    CHECK(ec3.max_abs_shift == ec.max_abs_shift);
    CHECK(ec3.mean_shift == ec.mean_shift);
    CHECK(ec3.sample_std == ec.sample_std);
}

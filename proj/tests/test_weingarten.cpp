#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "test_support.hpp"
#include "thermalab/equilibrium.hpp"
#include "thermalab/errors.hpp"
#include "thermalab/rng.hpp"
#include "thermalab/weingarten.hpp"

using namespace thermalab;
using testsupport::explicit_spectrum;
using testsupport::random_matrix;
using testsupport::random_state;

namespace {

Spectrum integer_levels(int n) {
    std::vector<double> e(n);
    for (int i = 0; i < n; ++i) e[i] = static_cast<double>(i);
    return explicit_spectrum(e);
}

}  // namespace

TEST_CASE("Weingarten values: exact rationals") {
    // Degree 2.
    CHECK(weingarten(2, CycleType::Identity, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(weingarten(2, CycleType::Transposition, 2) ==
          doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(weingarten(2, CycleType::Identity, 3) == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    CHECK(weingarten(2, CycleType::Transposition, 3) ==
          doctest::Approx(-1.0 / 24.0).epsilon(1e-15));
    CHECK(weingarten(2, CycleType::Identity, 6) == doctest::Approx(1.0 / 35.0).epsilon(1e-15));

    // Degree 3.
    CHECK(weingarten(3, CycleType::Identity, 3) == doctest::Approx(7.0 / 120.0).epsilon(1e-15));
    CHECK(weingarten(3, CycleType::Transposition, 3) ==
          doctest::Approx(-1.0 / 40.0).epsilon(1e-15));
    CHECK(weingarten(3, CycleType::ThreeCycle, 3) == doctest::Approx(1.0 / 60.0).epsilon(1e-15));
    CHECK(weingarten(3, CycleType::Identity, 4) == doctest::Approx(7.0 / 360.0).epsilon(1e-15));
    CHECK(weingarten(3, CycleType::Transposition, 4) ==
          doctest::Approx(-1.0 / 180.0).epsilon(1e-15));
    CHECK(weingarten(3, CycleType::ThreeCycle, 4) == doctest::Approx(1.0 / 360.0).epsilon(1e-15));

    // Small dimensions hit vanishing denominators and are refused.
    CHECK_THROWS_AS(weingarten(2, CycleType::Identity, 1), UnsupportedError);
    CHECK_THROWS_AS(weingarten(3, CycleType::Identity, 2), UnsupportedError);
    CHECK_THROWS_AS(weingarten(2, CycleType::ThreeCycle, 4), std::invalid_argument);
    CHECK_THROWS_AS(weingarten(4, CycleType::Identity, 8), UnsupportedError);
}

TEST_CASE("Weingarten orthogonality (Gram) residuals") {
    for (int d = 2; d <= 8; ++d) CHECK(weingarten_gram_residual(2, d) < 1e-12);
    for (int d = 3; d <= 8; ++d) CHECK(weingarten_gram_residual(3, d) < 1e-12);
    CHECK_THROWS_AS(weingarten_gram_residual(1, 4), UnsupportedError);
    CHECK_THROWS_AS(weingarten_gram_residual(4, 4), UnsupportedError);
}

TEST_CASE("degree-2 expansion reproduces E[|u_11|^4] = 2/(d(d+1))") {
    for (int d = 2; d <= 5; ++d) {
        Eigen::MatrixXcd e11 = Eigen::MatrixXcd::Zero(d, d);
        e11(0, 0) = 1.0;
        const Complex v = haar_second_moment(e11, e11, e11, e11);
        CHECK(v.real() == doctest::Approx(2.0 / (d * (d + 1.0))).epsilon(1e-14));
        CHECK(std::abs(v.imag()) < 1e-15);
    }
}

TEST_CASE("haar_second_moment matches an independent Monte Carlo estimate") {
    const int d = 3, n = 20000;
    const Eigen::MatrixXcd a = random_matrix(d, d, 51);
    const Eigen::MatrixXcd b = random_matrix(d, d, 52);
    const Eigen::MatrixXcd c = random_matrix(d, d, 53);
    const Eigen::MatrixXcd e = random_matrix(d, d, 54);

    Complex sum(0.0, 0.0);
    double sumsq = 0.0;
    for (int s = 0; s < n; ++s) {
        RngStream rng(stream_seed(77, static_cast<std::uint64_t>(s), 99));
        const Eigen::MatrixXcd u = haar_unitary(d, rng);
        const Complex val = (u * a * u.adjoint() * b).trace() * (u * c * u.adjoint() * e).trace();
        sum += val;
        sumsq += std::norm(val);
    }
    const Complex mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, sumsq / n - std::norm(mean));
    const double se = std::sqrt(var / n);
    CHECK(std::abs(mean - haar_second_moment(a, b, c, e)) < 4.0 * se);
}

TEST_CASE("haar_moment_verify: first and second moments within tolerance") {
    const HaarMomentReport r4 = haar_moment_verify(4, 20000, 123);
    CHECK(r4.n_samples == 20000);
    CHECK(r4.first_moment_max_se < 5.0);
    CHECK(r4.second_moment_dev_se < 5.0);

    const HaarMomentReport r2 = haar_moment_verify(2, 20000, 7);
    CHECK(r2.first_moment_max_se < 5.0);
    CHECK(r2.second_moment_dev_se < 5.0);

    CHECK_THROWS_AS(haar_moment_verify(1, 2000, 1), UnsupportedError);
    CHECK_THROWS_AS(haar_moment_verify(17, 2000, 1), UnsupportedError);
    CHECK_THROWS_AS(haar_moment_verify(4, 999, 1), InsufficientDataError);
}

TEST_CASE("equilibrium second moment: sample identity and mean") {
    const Spectrum spec = integer_levels(12);
    const WindowPartition part = partition_spectrum(spec, 3.0);
    const Eigen::VectorXcd c = random_state(12, 61);
    Eigen::MatrixXcd a = testsupport::random_hermitian(12, 62);
    a /= operator_norm(a);

    const SecondMomentReport rep = equilibrium_second_moment_check(c, a, part, spec, 5, 400);
    REQUIRE(rep.samples.size() == 400);
    CHECK(rep.min_window_dim == 3);
    CHECK(rep.variance_times_dmin == rep.variance * rep.min_window_dim);

    // Each sample is tr(psi_inf A) for that sample's block unitary.
    for (int s = 0; s < 5; ++s) {
        const BlockUnitary u = sample_block_unitary(part, 5, static_cast<std::uint64_t>(s));
        const Eigen::MatrixXcd eq = equilibrium_state(c, u, spec).mat;
        CHECK(rep.samples(s) == doctest::Approx(std::real((eq * a).trace())).epsilon(1e-10));
    }

    // The ensemble mean of tr(psi_inf A) is tr(rho_bar A).
    const Eigen::MatrixXcd avg = ensemble_average_equilibrium(c, part, spec).mat;
    const double target = std::real((avg * a).trace());
    const double se = std::sqrt(rep.variance / 400.0);
    CHECK(std::abs(rep.mean - target) < 4.0 * se);

    // Determinism across thread counts.
    const SecondMomentReport redo = equilibrium_second_moment_check(c, a, part, spec, 5, 400, 3);
    CHECK((redo.samples - rep.samples).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(equilibrium_second_moment_check(c, a, part, spec, 5, 1),
                    InsufficientDataError);
}

TEST_CASE("equilibrium second moment: variance shrinks with window dimension") {
    // Exact anchor at d = 2: with psi = e_1 and A = diag(1, -1) in one
    // window, the sample value is tr(psi_inf A) = (2u - 1)^2 where
    // u = |U_11|^2 is uniform on [0, 1] for Haar U(2). Hence the mean is
    // 1/3 and the variance is 1/5 - 1/9 = 4/45.
    {
        const Spectrum spec = integer_levels(2);
        const WindowPartition part = partition_spectrum(spec, 2.0);
        REQUIRE(part.count() == 1);
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
        a(0, 0) = 1.0;
        a(1, 1) = -1.0;
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2);
        c(0) = 1.0;
        const SecondMomentReport rep = equilibrium_second_moment_check(c, a, part, spec, 9, 4000);
        // ~14 estimator standard errors at 4000 samples
        CHECK(rep.mean == doctest::Approx(1.0 / 3.0).epsilon(0.01));
        CHECK(rep.variance == doctest::Approx(4.0 / 45.0).epsilon(0.02));
        CHECK(rep.variance_times_dmin == rep.variance * 2);
    }

    // Growing the window dimension concentrates the equilibrium expectation:
    // same traceless +/-1 diagonal observable, d = 4 vs d = 16.
    double var4 = 0.0, var16 = 0.0;
    for (int d : {4, 16}) {
        const Spectrum spec = integer_levels(d);
        const WindowPartition part = partition_spectrum(spec, static_cast<double>(d));
        REQUIRE(part.count() == 1);
        REQUIRE(part.min_dim() == d);
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
        for (int nu = 0; nu < d; ++nu) a(nu, nu) = (nu % 2 == 0) ? 1.0 : -1.0;
        const Eigen::VectorXcd c = random_state(d, 21 + d);
        const SecondMomentReport rep = equilibrium_second_moment_check(c, a, part, spec, 9, 2000);
        CHECK(rep.min_window_dim == d);
        (d == 4 ? var4 : var16) = rep.variance;
    }
    CHECK(var16 < 0.5 * var4);
}

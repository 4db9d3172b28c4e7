#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <complex>

#include "test_support.hpp"
#include "thermalab/operators.hpp"

using namespace thermalab;
using testsupport::bit_at;

namespace {

// Naive partial trace via explicit bit loops: keep the listed sites (site 0
// is the most significant digit), sum over everything else.
Eigen::MatrixXcd ptrace_naive(const Eigen::MatrixXcd& rho, const Region& keep,
                              const LatticeSpec& lat) {
    const int n = lat.n_sites();
    const long dk = region_dim(keep, lat);
    const long dim = lat.hilbert_dim();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
    for (long a = 0; a < dim; ++a) {
        for (long b = 0; b < dim; ++b) {
            // Environment bits must agree.
            bool env_match = true;
            for (int s = 0; s < n && env_match; ++s) {
                bool kept = false;
                for (int k : keep) kept = kept || (k == s);
                if (!kept) env_match = bit_at(a, s, n) == bit_at(b, s, n);
            }
            if (!env_match) continue;
            long ra = 0, rb = 0;
            for (int k : keep) {
                ra = ra * 2 + bit_at(a, k, n);
                rb = rb * 2 + bit_at(b, k, n);
            }
            out(ra, rb) += rho(a, b);
        }
    }
    return out;
}

// Trace norm through an independent eigensolver call on the difference.
double trace_distance_naive(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a - b);
    return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

TEST_CASE("pauli algebra") {
    const Eigen::MatrixXcd x = pauli('x'), y = pauli('y'), z = pauli('z'), id = pauli('i');
    const Complex i(0, 1);
    CHECK((x * x - id).norm() == doctest::Approx(0.0));
    CHECK((y * y - id).norm() == doctest::Approx(0.0));
    CHECK((x * y - i * z).norm() == doctest::Approx(0.0));
    CHECK((y * z - i * x).norm() == doctest::Approx(0.0));
    CHECK(x.trace() == Complex(0, 0));
    CHECK_THROWS_AS(pauli('w'), std::invalid_argument);
}

TEST_CASE("kron against the quadruple loop") {
    const Eigen::MatrixXcd a = testsupport::random_matrix(2, 3, 11);
    const Eigen::MatrixXcd b = testsupport::random_matrix(3, 2, 12);
    const Eigen::MatrixXcd k = kron(a, b);
    REQUIRE(k.rows() == 6);
    REQUIRE(k.cols() == 6);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 2; ++q)
                    CHECK(std::abs(k(3 * i + p, 2 * j + q) - a(i, j) * b(p, q)) < 1e-15);
}

TEST_CASE("embed_observable places blocks with site 0 most significant") {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = 3;
    const Eigen::MatrixXcd z = pauli('z'), id2 = pauli('i');

    CHECK((embed_observable(z, {0}, lat) - kron(kron(z, id2), id2)).norm() < 1e-14);
    CHECK((embed_observable(z, {2}, lat) - kron(kron(id2, id2), z)).norm() < 1e-14);
    CHECK((embed_observable(kron(z, z), {0, 1}, lat) - kron(kron(z, z), id2)).norm() < 1e-14);

    // Non-contiguous region {0, 2}: compare entrywise against bit arithmetic.
    const Eigen::MatrixXcd blk = testsupport::random_matrix(4, 4, 21);
    const Eigen::MatrixXcd full = embed_observable(blk, {0, 2}, lat);
    for (long a = 0; a < 8; ++a)
        for (long b = 0; b < 8; ++b) {
            const long ra = 2 * bit_at(a, 0, 3) + bit_at(a, 2, 3);
            const long rb = 2 * bit_at(b, 0, 3) + bit_at(b, 2, 3);
            const Complex expected =
                bit_at(a, 1, 3) == bit_at(b, 1, 3) ? blk(ra, rb) : Complex(0, 0);
            CHECK(std::abs(full(a, b) - expected) < 1e-15);
        }

    CHECK_THROWS_AS(embed_observable(blk, {0}, lat), std::invalid_argument);  // size mismatch
}

TEST_CASE("partial trace equals the naive bit-loop reduction") {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = 3;
    const Eigen::MatrixXcd rho = testsupport::random_density(8, 31);
    for (const Region& keep : {Region{0}, Region{1}, Region{2}, Region{0, 2}, Region{1, 2}}) {
        const Eigen::MatrixXcd fast = partial_trace(rho, keep, lat);
        const Eigen::MatrixXcd slow = ptrace_naive(rho, keep, lat);
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(std::abs(fast.trace() - rho.trace()) < 1e-12);
    }
}

TEST_CASE("partial trace of a product state factorizes") {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = 3;
    const Eigen::VectorXcd psi = bloch_product_state(lat, 0.7, 1.1);
    const Eigen::MatrixXcd rho = psi * psi.adjoint();
    const Eigen::MatrixXcd r1 = partial_trace(rho, {1}, lat);
    // Single-site state repeated on every site.
    LatticeSpec one;
    one.dimension = 1;
    one.side = 2;  // smallest valid lattice; take its one-site reduction
    const Eigen::VectorXcd pair = bloch_product_state(one, 0.7, 1.1);
    const Eigen::MatrixXcd site = partial_trace(pair * pair.adjoint(), {0}, one);
    CHECK((r1 - site).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("factored partial trace matches the dense route") {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = 3;
    const Eigen::MatrixXcd cols = testsupport::random_matrix(8, 3, 41);
    const Eigen::MatrixXcd rho = cols * cols.adjoint();
    for (const Region& keep : {Region{0}, Region{0, 1}, Region{1, 2}}) {
        const Eigen::MatrixXcd a = partial_trace(rho, keep, lat);
        const Eigen::MatrixXcd b = partial_trace_columns(cols, keep, lat);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("trace distance is the full trace norm") {
    // Commuting diagonal case: sum of absolute probability differences.
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(3, 3), q = p;
    p.diagonal() << 0.5, 0.3, 0.2;
    q.diagonal() << 0.2, 0.2, 0.6;
    CHECK(trace_distance(p, q) == doctest::Approx(0.3 + 0.1 + 0.4).epsilon(1e-12));

    // Orthogonal pure states sit at distance 2.
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(4), e1 = e0;
    e0(0) = 1;
    e1(1) = 1;
    CHECK(trace_distance(e0 * e0.adjoint(), e1 * e1.adjoint()) == doctest::Approx(2.0));

    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::MatrixXcd a = testsupport::random_density(6, 100 + rep);
        const Eigen::MatrixXcd b = testsupport::random_density(6, 200 + rep);
        CHECK(trace_distance(a, b) == doctest::Approx(trace_distance_naive(a, b)).epsilon(1e-11));
        CHECK(trace_distance(a, a) < 1e-13);
    }
}

TEST_CASE("operator norm and hermiticity residual") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d.diagonal() << 3.0, -5.0;
    CHECK(operator_norm(d) == doctest::Approx(5.0));
    CHECK(hermiticity_residual(d) < 1e-15);
    Eigen::MatrixXcd skew = d;
    skew(0, 1) = Complex(0, 1);
    // |a - a^dagger| peaks at 1, scaled by the largest entry magnitude 5.
    CHECK(hermiticity_residual(skew) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("bloch product state angles") {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = 4;
    const double pi = 3.14159265358979323846;
    const Eigen::VectorXcd psi = bloch_product_state(lat, pi / 2, pi / 2);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-13));

    // Single-site expectations: <Z> = cos(theta), <Y> = sin(theta) sin(phi).
    const Eigen::MatrixXcd rho1 = partial_trace(psi * psi.adjoint(), {2}, lat);
    CHECK(std::abs((pauli('z') * rho1).trace().real()) < 1e-13);
    CHECK((pauli('y') * rho1).trace().real() == doctest::Approx(1.0).epsilon(1e-12));

    // Per-site angle list overload agrees with the uniform case.
    const Eigen::VectorXcd psi2 =
        bloch_product_state(lat, std::vector<std::pair<double, double>>(4, {pi / 2, pi / 2}));
    CHECK((psi - psi2).norm() < 1e-13);
}

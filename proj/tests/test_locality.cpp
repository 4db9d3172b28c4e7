#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "thermalab/gibbs.hpp"
#include "thermalab/hamiltonian.hpp"
#include "thermalab/locality.hpp"
#include "thermalab/operators.hpp"
#include "thermalab/spectrum.hpp"

using namespace thermalab;
using testsupport::random_density;
using testsupport::random_matrix;

namespace {

LatticeSpec chain(int side, Boundary b = Boundary::Periodic) {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = side;
    lat.local_dim = 2;
    lat.boundary = b;
    return lat;
}

// Computational-basis projector onto the all-|b> product state.
Eigen::MatrixXcd product_projector(int n_sites, int b) {
    const long dim = 1L << n_sites;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const long idx = (b == 0) ? 0 : dim - 1;
    m(idx, idx) = 1.0;
    return m;
}

}  // namespace

TEST_CASE("local distinguishability: metric basics") {
    const LatticeSpec lat = chain(4);
    const Eigen::MatrixXcd rho = random_density(16, 3);
    const Eigen::MatrixXcd sig = random_density(16, 4);
    const Eigen::MatrixXcd tau = random_density(16, 5);

    CHECK(local_distinguishability(rho, rho, 2, lat).value == 0.0);

    const LocalDistances ds = local_distinguishability(rho, sig, 2, lat);
    const LocalDistances sd = local_distinguishability(sig, rho, 2, lat);
    CHECK(ds.value == doctest::Approx(sd.value).epsilon(1e-13));
    CHECK(ds.per_cube.size() == lat.cubes(2).size());

    // Value is the mean of the per-cube trace norms.
    double mean = 0.0;
    for (double v : ds.per_cube) mean += v;
    mean /= static_cast<double>(ds.per_cube.size());
    CHECK(ds.value == doctest::Approx(mean).epsilon(1e-14));

    // Triangle inequality cube by cube, hence for the mean.
    const LocalDistances dt = local_distinguishability(rho, tau, 2, lat);
    const LocalDistances st = local_distinguishability(sig, tau, 2, lat);
    CHECK(dt.value <= ds.value + st.value + 1e-12);

    // l = side reduces to the full-system trace distance over one cube.
    const LocalDistances full = local_distinguishability(rho, sig, 4, lat);
    CHECK(full.per_cube.size() == lat.cubes(4).size());
    CHECK(full.per_cube[0] == doctest::Approx(trace_distance(rho, sig)).epsilon(1e-12));
}

TEST_CASE("orthogonal product states are maximally distinguishable locally") {
    const LatticeSpec lat = chain(6);
    const Eigen::MatrixXcd zeros = product_projector(6, 0);
    const Eigen::MatrixXcd ones = product_projector(6, 1);
    for (int l : {1, 2, 3}) {
        const LocalDistances d = local_distinguishability(zeros, ones, l, lat);
        CHECK(d.value == doctest::Approx(2.0).epsilon(1e-12));
        for (double v : d.per_cube) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
    }
}

TEST_CASE("factored local distinguishability matches the dense route") {
    const LatticeSpec lat = chain(4);
    const Eigen::MatrixXcd x = random_matrix(16, 3, 8);
    const Eigen::MatrixXcd y = random_matrix(16, 3, 9);
    const FactoredDensity fx{x};
    const FactoredDensity fy{y};
    const Eigen::MatrixXcd dx = x * x.adjoint();
    const Eigen::MatrixXcd dy = y * y.adjoint();

    for (int l : {1, 2, 3}) {
        const LocalDistances fac = local_distinguishability(fx, fy, l, lat);
        const LocalDistances den = local_distinguishability(dx, dy, l, lat);
        REQUIRE(fac.per_cube.size() == den.per_cube.size());
        for (size_t i = 0; i < fac.per_cube.size(); ++i) {
            CHECK(fac.per_cube[i] == doctest::Approx(den.per_cube[i]).epsilon(1e-10));
        }
    }

    // Thread count must not change the result.
    const LocalDistances t1 = local_distinguishability(fx, fy, 2, lat, 1);
    const LocalDistances t3 = local_distinguishability(fx, fy, 2, lat, 3);
    for (size_t i = 0; i < t1.per_cube.size(); ++i) CHECK(t1.per_cube[i] == t3.per_cube[i]);

    CHECK_THROWS_AS(local_distinguishability(random_density(8, 1), dx, 1, lat),
                    std::invalid_argument);
}

TEST_CASE("translation gap vanishes for a translation-invariant state") {
    const ModelSpec model = testsupport::ising_chain(6, Boundary::Periodic);
    const Spectrum spec = diagonalize(build_hamiltonian(model).matrix);
    const GibbsState g = gibbs_state(spec, 0.4);
    const Eigen::MatrixXcd rho = spec.vectors *
                                 g.weights.cast<Complex>().asDiagonal().toDenseMatrix() *
                                 spec.vectors.adjoint();
    const Eigen::MatrixXcd t = translation_operator(model.lattice, 0);

    const TranslationGap tg =
        translation_gap(rho, pauli('z'), Region{0}, Region{1}, model.lattice, spec, t);
    CHECK(tg.gap < 1e-9);
    CHECK(tg.shift == std::vector<int>{1});
    CHECK(tg.eigenstate_invariance.size() == spec.dim());
    CHECK(tg.min_invariance >= 0.0);
    CHECK(tg.eigenstate_invariance.maxCoeff() <= 1.0 + 1e-10);

    // Wrap-around congruence: {5} -> {0} under the periodic shift.
    const TranslationGap wrap =
        translation_gap(rho, pauli('z'), Region{5}, Region{0}, model.lattice, spec, t);
    CHECK(wrap.gap < 1e-9);
    CHECK(wrap.shift == std::vector<int>{1});
}

TEST_CASE("translation gap: hand value on a biased product state") {
    const ModelSpec model = testsupport::ising_chain(6, Boundary::Periodic);
    const Spectrum spec = diagonalize(build_hamiltonian(model).matrix);
    const Eigen::MatrixXcd t = translation_operator(model.lattice, 0);

    // |0><0| on site 0, |1><1| on site 1, |0><0| elsewhere:
    // <Z_0> - <Z_1> = 1 - (-1) = 2.
    const long idx = 1L << 4;  // bit pattern 010000, site 0 is the MSB
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(64, 64);
    rho(idx, idx) = 1.0;
    const TranslationGap tg =
        translation_gap(rho, pauli('z'), Region{0}, Region{1}, model.lattice, spec, t);
    CHECK(tg.gap == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(translation_gap(rho, pauli('z'), Region{0}, Region{1, 2}, model.lattice,
                                    spec, t),
                    std::invalid_argument);
    CHECK_THROWS_AS(translation_gap(rho, kron(pauli('z'), pauli('z')), Region{0, 1}, Region{2, 4},
                                    model.lattice, spec, t),
                    std::invalid_argument);
}

TEST_CASE("indistinguishability condition: arithmetic and branches") {
    const ModelSpec model = testsupport::ising_chain(6, Boundary::Periodic);
    const Spectrum spec = diagonalize(build_hamiltonian(model).matrix);
    const GibbsState g = gibbs_state(spec, 0.5);
    const DensityMatrix tau{
        g.weights.cast<Complex>().asDiagonal().toDenseMatrix(), Basis::Energy};

    // tau = Gibbs: the relative entropy vanishes.
    const ConditionReport small =
        check_indistinguishability_condition(tau, g, spec, 0.1, 1, 0.5, 1.0, model.lattice);
    CHECK(std::abs(small.s_rel_bits) < 1e-9);

    // Recompute both sides of the inequality from the reported inputs.
    const double n = 6.0, eps = 0.1, xi = 0.5, z = 1.0, l = 1.0;
    const double lhs = (small.s_rel_bits + 3.0) / eps +
                       (2.0 * xi * std::log(2.0) * l + l + 2.0) / (xi * std::log(2.0)) +
                       (z + 1.0) * std::log2(n);
    const double rhs = std::pow(eps * n / (std::log(4.0) * xi), 1.0 / 2.0);
    CHECK(small.lhs == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(small.rhs == doctest::Approx(rhs).epsilon(1e-12));
    // At six sites the inequality cannot hold; no bound is claimed.
    CHECK(small.satisfied == (small.lhs <= small.rhs));
    CHECK_FALSE(small.satisfied);
    CHECK(small.guaranteed_bound == 0.0);

    // The checker is a pure function of the macroscopic inputs, so a large
    // hypothetical lattice exercises the satisfied branch honestly.
    LatticeSpec big = model.lattice;
    big.side = 1000000;
    const ConditionReport sat =
        check_indistinguishability_condition(tau, g, spec, 0.1, 1, 0.5, 1.0, big);
    CHECK(sat.lhs <= sat.rhs);
    CHECK(sat.satisfied);
    CHECK(sat.guaranteed_bound == doctest::Approx(7.0 * std::sqrt(0.1)).epsilon(1e-14));

    CHECK_THROWS_AS(
        check_indistinguishability_condition(tau, g, spec, 0.0, 1, 0.5, 1.0, model.lattice),
        std::invalid_argument);
    CHECK_THROWS_AS(
        check_indistinguishability_condition(tau, g, spec, 0.1, 1, 0.0, 1.0, model.lattice),
        std::invalid_argument);
    CHECK_THROWS_AS(
        check_indistinguishability_condition(tau, g, spec, 0.1, 7, 0.5, 1.0, model.lattice),
        std::invalid_argument);
}

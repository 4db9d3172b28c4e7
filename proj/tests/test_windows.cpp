#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "test_support.hpp"
#include "thermalab/errors.hpp"
#include "thermalab/windows.hpp"

using namespace thermalab;
using testsupport::explicit_spectrum;

TEST_CASE("partition: hand-checked windows on an explicit spectrum") {
    const Spectrum s = explicit_spectrum({0.0, 0.3, 0.6, 1.0, 1.3});
    const WindowPartition p = partition_spectrum(s, 0.5);
    REQUIRE(p.count() == 3);
    CHECK(p.anchor == doctest::Approx(0.0));
    CHECK(p.range[0] == std::pair<int, int>{0, 2});  // 0.0, 0.3
    CHECK(p.range[1] == std::pair<int, int>{2, 3});  // 0.6
    CHECK(p.range[2] == std::pair<int, int>{3, 5});  // 1.0, 1.3
    CHECK(p.lo[1] == doctest::Approx(0.5));
    CHECK(p.hi[1] == doctest::Approx(1.0));
    CHECK(p.dim(0) == 2);
    CHECK(p.min_dim() == 1);
    CHECK(p.max_width() == doctest::Approx(0.5));
    CHECK(p.window_of_level(0) == 0);
    CHECK(p.window_of_level(2) == 1);
    CHECK(p.window_of_level(4) == 2);
}

TEST_CASE("partition drops empty bins and covers every level") {
    const Spectrum s = explicit_spectrum({0.0, 5.0, 5.2});
    const WindowPartition p = partition_spectrum(s, 1.0);
    REQUIRE(p.count() == 2);
    CHECK(p.range[0] == std::pair<int, int>{0, 1});
    CHECK(p.range[1] == std::pair<int, int>{1, 3});
    int covered = 0;
    for (int k = 0; k < p.count(); ++k) {
        CHECK(p.range[k].first == covered);
        covered = p.range[k].second;
    }
    CHECK(covered == s.dim());
}

TEST_CASE("degeneracy classes are never split: the edge moves up") {
    // A degenerate pair exactly on the nominal edge lands whole in the
    // upper window.
    const Spectrum s = explicit_spectrum({0.0, 0.5, 0.5, 1.2});
    const WindowPartition p = partition_spectrum(s, 0.5);
    REQUIRE(p.count() == 3);
    CHECK(p.range[0] == std::pair<int, int>{0, 1});
    CHECK(p.range[1] == std::pair<int, int>{1, 3});
    CHECK(p.range[2] == std::pair<int, int>{3, 4});
    for (int k = 0; k < p.count(); ++k)
        CHECK_NOTHROW(classes_in_window(s, p.range[k].first, p.range[k].second));

    // A genuine straddle: one member below the 0.5 edge, one above, merged
    // into a single class by the relative tolerance. The edge moves up.
    const Spectrum s2 = explicit_spectrum({0.0, 0.4999999999, 0.5000000001, 0.9});
    const WindowPartition p2 = partition_spectrum(s2, 0.25);
    for (int k = 0; k < p2.count(); ++k)
        CHECK_NOTHROW(classes_in_window(s2, p2.range[k].first, p2.range[k].second));
    // The merged pair sits in one window together.
    CHECK(p2.window_of_level(1) == p2.window_of_level(2));
    bool any_moved = false;
    for (char m : p2.edge_moved) any_moved = any_moved || m;
    CHECK(any_moved);
    // Windows never overlap and widths stay positive.
    for (int k = 0; k < p2.count(); ++k) {
        CHECK(p2.width(k) > 0.0);
        if (k > 0) CHECK(p2.lo[k] >= p2.hi[k - 1] - 1e-12);
    }
}

TEST_CASE("classes_in_window rejects a straddling range") {
    const Spectrum s = explicit_spectrum({0.0, 1.0, 1.0, 2.0});
    CHECK_THROWS_AS(classes_in_window(s, 0, 2), BasisMismatchError);
    CHECK(classes_in_window(s, 1, 3).size() == 1);
}

TEST_CASE("window weights: normalization and direct sums") {
    const Spectrum s = explicit_spectrum({0.0, 0.3, 0.6, 1.0, 1.3});
    const WindowPartition p = partition_spectrum(s, 0.5);
    const Eigen::VectorXcd c = testsupport::random_state(5, 3);
    const Eigen::VectorXd q = window_weights(c, p);
    CHECK(q.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q(0) ==
          doctest::Approx(std::norm(c(0)) + std::norm(c(1))).epsilon(1e-12));

    Eigen::VectorXd diag(5);
    diag << 0.1, 0.2, 0.3, 0.25, 0.15;
    const Eigen::VectorXd qd = window_weights(diag, p);
    CHECK(qd(2) == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("count_states_in_window equals the direct scan") {
    const Spectrum s = explicit_spectrum({-1.0, -0.2, 0.0, 0.1, 0.4, 2.0});
    for (double center : {-0.5, 0.0, 0.3, 1.0}) {
        for (double w : {0.1, 0.5, 1.5}) {
            // Linear scan of the closed interval; same edge arithmetic as the
            // definition so both routes agree bit for bit.
            long direct = 0;
            for (long i = 0; i < s.dim(); ++i)
                if (s.energies(i) >= center - w && s.energies(i) <= center + w) ++direct;
            CHECK(count_states_in_window(s, center, w) == direct);
        }
    }
}

TEST_CASE("anchor override shifts the grid") {
    const Spectrum s = explicit_spectrum({0.0, 0.3, 0.6, 1.0});
    const WindowPartition p = partition_spectrum(s, 0.5, -0.25);
    CHECK(p.anchor == doctest::Approx(-0.25));
    CHECK(p.lo[0] >= -0.25);
    // Level 0.3 now belongs to [0.25, 0.75).
    CHECK(p.window_of_level(1) == p.window_of_level(2));
}

TEST_CASE("partition argument guards") {
    const Spectrum s = explicit_spectrum({0.0, 1.0});
    CHECK_THROWS_AS(partition_spectrum(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(partition_spectrum(s, -1.0), std::invalid_argument);
}

TEST_CASE("spectral assumption report: monotone and decay diagnostics") {
    // Binomial-like bulk: occupations rise toward the middle. Use a smooth
    // quadratic DOS proxy with distinct values.
    std::vector<double> energies;
    for (int i = 0; i < 200; ++i) {
        const double x = (i + 0.5) / 200.0;             // (0, 1)
        energies.push_back(2.0 * std::pow(x, 0.35));     // increasing density
    }
    Spectrum s = explicit_spectrum(energies);
    const SpectralAssumptionReport rep = spectral_assumption_report(s, 0.2, 10);
    CHECK(rep.monotone_pass);
    CHECK(rep.monotone_pairs_checked > 0);
    CHECK(rep.monotone_violations.empty());

    // A hole in the low-energy DOS triggers a monotone violation.
    std::vector<double> dip;
    for (int i = 0; i < 40; ++i) dip.push_back(0.01 * i);          // dense: dim 40
    for (int i = 0; i < 3; ++i) dip.push_back(0.5 + 0.06 * i);     // sparse window
    for (int i = 0; i < 60; ++i) dip.push_back(0.8 + 0.005 * i);   // dense again
    for (int i = 0; i < 80; ++i) dip.push_back(1.2 + 0.004 * i);
    Spectrum s2 = explicit_spectrum(dip);
    const SpectralAssumptionReport rep2 = spectral_assumption_report(s2, 0.2, 10);
    CHECK_FALSE(rep2.monotone_pass);
    REQUIRE_FALSE(rep2.monotone_violations.empty());
    const auto& v = rep2.monotone_violations.front();
    CHECK(v.dim_lo > v.dim_hi);

    // Decay rows: ratio definition k^3 m_shifted / m_base, worst consistent.
    double worst = 0.0;
    for (const auto& row : rep.decay_rows) {
        CHECK(row.ratio ==
              doctest::Approx(std::pow(row.k, 3) * row.m_shifted /
                              static_cast<double>(row.m_base)));
        worst = std::max(worst, row.ratio);
    }
    if (!rep.decay_rows.empty()) CHECK(rep.decay_worst == doctest::Approx(worst));
    CHECK(rep.decay_pass == (worst <= 1.0));
}

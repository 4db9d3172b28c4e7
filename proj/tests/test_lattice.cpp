#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "thermalab/errors.hpp"
#include "thermalab/lattice.hpp"

using namespace thermalab;

TEST_CASE("coords and site index round trip in one and two dimensions") {
    for (int dim : {1, 2}) {
        LatticeSpec lat;
        lat.dimension = dim;
        lat.side = 3;
        for (int s = 0; s < lat.n_sites(); ++s) {
            const auto c = lat.coords(s);
            CHECK(static_cast<int>(c.size()) == dim);
            CHECK(lat.site(c) == s);
        }
    }
    // Row-major: in 2D the second coordinate varies fastest.
    LatticeSpec lat;
    lat.dimension = 2;
    lat.side = 3;
    CHECK(lat.site({0, 1}) == 1);
    CHECK(lat.site({1, 0}) == 3);
}

TEST_CASE("bond enumeration matches the naive double loop") {
    for (auto b : {Boundary::Open, Boundary::Periodic}) {
        LatticeSpec lat;
        lat.dimension = 1;
        lat.side = 5;
        lat.boundary = b;
        const auto bonds = lat.bonds();
        const int expected = b == Boundary::Open ? 4 : 5;
        CHECK(static_cast<int>(bonds.size()) == expected);
        std::set<std::pair<int, int>> seen(bonds.begin(), bonds.end());
        CHECK(seen.size() == bonds.size());  // no duplicates
        for (const auto& [x, y] : bonds) {
            CHECK(x < y);
            CHECK(lat.distance(x, y) == 1);
        }
    }
    // 2D periodic 3x3: 2 * 9 bonds.
    LatticeSpec lat2;
    lat2.dimension = 2;
    lat2.side = 3;
    lat2.boundary = Boundary::Periodic;
    CHECK(lat2.bonds().size() == 18);
}

TEST_CASE("distance is Manhattan with wrap awareness") {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = 6;
    lat.boundary = Boundary::Periodic;
    CHECK(lat.distance(0, 5) == 1);  // wraps
    CHECK(lat.distance(0, 3) == 3);
    lat.boundary = Boundary::Open;
    CHECK(lat.distance(0, 5) == 5);

    LatticeSpec lat2;
    lat2.dimension = 2;
    lat2.side = 4;
    lat2.boundary = Boundary::Periodic;
    CHECK(lat2.distance(lat2.site({0, 0}), lat2.site({3, 3})) == 2);
}

TEST_CASE("cube enumeration: counts, shapes, and wrap cubes") {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = 4;

    lat.boundary = Boundary::Open;
    auto cubes = lat.cubes(2);
    REQUIRE(cubes.size() == 3);
    CHECK(cubes[0] == Region{0, 1});
    CHECK(cubes[2] == Region{2, 3});

    lat.boundary = Boundary::Periodic;
    cubes = lat.cubes(2);
    REQUIRE(cubes.size() == 4);
    // The wrap cube anchored at 3 contains sites {3, 0}, stored sorted.
    bool found_wrap = false;
    for (const auto& c : cubes) found_wrap = found_wrap || c == Region{0, 3};
    CHECK(found_wrap);
    for (const auto& c : cubes) {
        CHECK(c.size() == 2);
        CHECK(std::is_sorted(c.begin(), c.end()));
    }

    // l = side covers everything exactly once per anchor.
    for (const auto& c : lat.cubes(4)) CHECK(c == Region{0, 1, 2, 3});

    LatticeSpec lat2;
    lat2.dimension = 2;
    lat2.side = 3;
    lat2.boundary = Boundary::Open;
    CHECK(lat2.cubes(2).size() == 4);
    lat2.boundary = Boundary::Periodic;
    CHECK(lat2.cubes(2).size() == 9);
    for (const auto& c : lat2.cubes(2)) CHECK(c.size() == 4);
}

TEST_CASE("region diameter and validation") {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = 6;
    lat.boundary = Boundary::Periodic;
    CHECK(lat.region_diameter({0}) == 0);
    CHECK(lat.region_diameter({0, 1, 5}) == 2);

    CHECK_THROWS_AS(validate_region({}, lat), std::invalid_argument);
    CHECK_THROWS_AS(validate_region({0, 0}, lat), std::invalid_argument);
    CHECK_THROWS_AS(validate_region({0, 6}, lat), std::invalid_argument);
    CHECK_THROWS_AS(validate_region({2, 1}, lat), std::invalid_argument);
    CHECK_NOTHROW(validate_region({1, 4}, lat));
}

TEST_CASE("hilbert dimension guard") {
    LatticeSpec lat;
    lat.dimension = 1;
    lat.side = 10;
    CHECK(lat.hilbert_dim() == 1024);
    lat.side = 14;
    CHECK_THROWS_AS(lat.hilbert_dim(13), DimensionGuardError);
    CHECK(lat.hilbert_dim(14) == 16384);
}

TEST_CASE("spec validation rejects nonsense") {
    LatticeSpec lat;
    lat.dimension = 0;
    CHECK_THROWS_AS(lat.validate(), std::invalid_argument);
    lat.dimension = 1;
    lat.side = 0;
    CHECK_THROWS_AS(lat.validate(), std::invalid_argument);
    lat.side = 2;
    lat.local_dim = 1;
    CHECK_THROWS_AS(lat.validate(), std::invalid_argument);
    lat.local_dim = 2;
    CHECK_NOTHROW(lat.validate());

    CHECK_THROWS_AS(lat.cubes(0), std::invalid_argument);
    CHECK_THROWS_AS(lat.cubes(3), std::invalid_argument);
}

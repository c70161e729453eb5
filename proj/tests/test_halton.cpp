#include <catch2/catch_amalgamated.hpp>

#include "qmcrf/halton.hpp"

using namespace qmcrf;
using Catch::Matchers::WithinAbs;

TEST_CASE("halton first point at offset 1 is (1/2, 1/3)") {
    const PointSet ps = halton_points(1, 2, 1);
    CHECK_THAT(ps.points(0, 0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(ps.points(0, 1), WithinAbs(1.0 / 3.0, 1e-15));
}

TEST_CASE("halton base 2 radical inverses of 1 and 2") {
    const PointSet ps = halton_points(2, 1, 1);
    CHECK(ps.points(0, 0) == 0.5);
    CHECK(ps.points(1, 0) == 0.25);
}

TEST_CASE("halton index 0 maps to the origin") {
    const PointSet ps = halton_points(1, 1, 0);
    CHECK(ps.points(0, 0) == 0.0);
}

TEST_CASE("halton default offset skips the origin") {
    const PointSet ps = halton_points(64, 4);
    CHECK(ps.meta.index_offset == 1);
    CHECK((ps.points.array() > 0.0).all());
    CHECK((ps.points.array() < 1.0).all());
}

TEST_CASE("halton rejects unsupported dimensions") {
    CHECK_THROWS_AS(halton_points(4, 65), config_error);
    CHECK_THROWS_AS(halton_points(4, 0), config_error);
}

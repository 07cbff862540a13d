#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "graphct/geometry.hpp"

using namespace graphct;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
} // namespace

TEST_CASE("uniform geometry divides the circle") {
    const auto g = build_geometry(4, 8, BeamKind::parallel, kInf, 1.0);
    REQUIRE(g.view_count() == 4);
    CHECK(g.source_angles()[0] == doctest::Approx(0.0));
    CHECK(g.source_angles()[1] == doctest::Approx(kPi / 2));
    CHECK(g.source_angles()[2] == doctest::Approx(kPi));
    CHECK(g.source_angles()[3] == doctest::Approx(3 * kPi / 2));
    CHECK(g.full_rotation());
    // uniformity invariant at tight tolerance
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(g.source_angles()[i] - i * (2 * kPi / 4)) < 1e-12);
}

TEST_CASE("production-sized fan geometry") {
    const auto g = build_geometry(3600, 956, BeamKind::fan, 10.0, 0.01);
    CHECK(g.view_count() == 3600);
    CHECK(g.detector_pixel_count() == 956);
    CHECK(g.full_rotation());
}

TEST_CASE("degenerate geometries are rejected") {
    CHECK_THROWS(build_geometry(2, 8, BeamKind::parallel, kInf, 1.0));
    CHECK_THROWS(build_geometry(8, 8, BeamKind::fan, -1.0, 1.0));
    CHECK_THROWS(build_geometry(8, 8, BeamKind::fan, kInf, 1.0));
    CHECK_THROWS(build_geometry(8, 8, BeamKind::parallel, kInf, 0.0));
    CHECK_THROWS(build_geometry(8, 0, BeamKind::parallel, kInf, 1.0));
    CHECK_THROWS(build_geometry(8, 8, BeamKind::parallel, 5.0, 1.0));
}

TEST_CASE("from_angles validates ordering and range") {
    CHECK_THROWS(AcquisitionGeometry::from_angles({0.0, 0.5, 0.5}, 4, BeamKind::parallel, kInf, 1.0));
    CHECK_THROWS(AcquisitionGeometry::from_angles({0.0, 2 * kPi}, 4, BeamKind::parallel, kInf, 1.0));
    const auto open = AcquisitionGeometry::from_angles({0.0, kPi / 6, kPi / 3}, 4,
                                                       BeamKind::parallel, kInf, 1.0);
    CHECK_FALSE(open.full_rotation());
}

TEST_CASE("subsampling keeps every factor-th angle") {
    const auto g = build_geometry(3600, 956, BeamKind::parallel, kInf, 1.0);

    SUBCASE("divisor factor stays a uniform full rotation") {
        const auto sub = subsample_geometry(g, 10);
        REQUIRE(sub.view_count() == 360);
        CHECK(sub.full_rotation());
        // 1 degree gap
        CHECK(sub.source_angles()[1] - sub.source_angles()[0] ==
              doctest::Approx(2 * kPi / 360).epsilon(1e-12));
    }

    SUBCASE("factor 1 is the identity") {
        const auto sub = subsample_geometry(g, 1);
        CHECK(sub == g);
    }

    SUBCASE("non-divisor factor truncates and breaks the circle") {
        const auto g360 = build_geometry(360, 16, BeamKind::parallel, kInf, 1.0);
        const auto sub = subsample_geometry(g360, 7);
        // floor(n/factor) views are kept: indices 0, 7, ..., 7*(kept-1)
        const int kept = 360 / 7;
        REQUIRE(sub.view_count() == kept);
        CHECK(kept == 51);
        CHECK_FALSE(sub.full_rotation());
        for (int i = 0; i < kept; ++i)
            CHECK(sub.source_angles()[i] ==
                  doctest::Approx(g360.source_angles()[static_cast<std::size_t>(i) * 7])
                      .epsilon(1e-15));
    }

    SUBCASE("bad factors are rejected") {
        CHECK_THROWS(subsample_geometry(g, 0));
        CHECK_THROWS(subsample_geometry(g, -2));
        CHECK_THROWS(subsample_geometry(g, 2000)); // fewer than 3 views would remain
    }
}

TEST_CASE("geometry hash tracks content") {
    const auto a = build_geometry(90, 96, BeamKind::parallel, kInf, 0.023);
    const auto b = build_geometry(90, 96, BeamKind::parallel, kInf, 0.023);
    const auto c = build_geometry(90, 96, BeamKind::parallel, kInf, 0.024);
    CHECK(a.hash() == b.hash());
    CHECK(a.hash() != c.hash());
}

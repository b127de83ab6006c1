#include <catch_amalgamated.hpp>

#include <random>

#include "mdm/geometry.hpp"

using namespace mdm;
using Catch::Matchers::WithinAbs;

TEST_CASE("dist_point_segment examples", "[geometry]") {
    CHECK_THAT(dist_point_segment({0, 0}, Segment{{1, 0}, {2, 0}}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(dist_point_segment({0, 1}, Segment{{-1, 0}, {1, 0}}), WithinAbs(1.0, 1e-15));
    CHECK_THAT(dist_point_segment({3, 4}, Segment{{0, 0}, {0, 0}}), WithinAbs(5.0, 1e-15));
    CHECK(dist_point_segment({0.5, 0}, Segment{{0, 0}, {1, 0}}) == 0.0);
}

TEST_CASE("dist_point_arc examples", "[geometry]") {
    const CircularArc full{{0, 0}, 1.0, 0.0, kTwoPi, Orientation::CounterClockwise};
    CHECK_THAT(dist_point_arc({0, 0}, full), WithinAbs(1.0, 1e-15));
    CHECK_THAT(dist_point_arc({2, 0}, full), WithinAbs(1.0, 1e-15));
    CHECK_THAT(dist_point_arc({std::cos(1.0), std::sin(1.0)}, full), WithinAbs(0.0, 1e-15));

    // Upper half circle: below the x-axis the nearest point is an endpoint.
    const CircularArc upper{{0, 0}, 1.0, 0.0, kPi, Orientation::CounterClockwise};
    CHECK_THAT(dist_point_arc({0, -2}, upper), WithinAbs(std::sqrt(5.0), 1e-14));
    CHECK_THAT(dist_point_arc({0, 3}, upper), WithinAbs(2.0, 1e-14));
    // Same set described clockwise.
    const CircularArc upper_cw{{0, 0}, 1.0, kPi, 0.0, Orientation::Clockwise};
    CHECK_THAT(dist_point_arc({0, -2}, upper_cw), WithinAbs(std::sqrt(5.0), 1e-14));
    CHECK_THAT(dist_point_arc({0.3, 0.4}, upper_cw), WithinAbs(0.5, 1e-14));
}

TEST_CASE("directed_angle is clockwise positive", "[geometry]") {
    const Ray px({0, 0}, {1, 0}), py({0, 0}, {0, 1}), ny({0, 0}, {0, -1}), nx({0, 0}, {-1, 0});
    CHECK(directed_angle(px, px) == 0.0);
    CHECK_THAT(directed_angle(px, ny), WithinAbs(kPi / 2, 1e-15));
    CHECK_THAT(directed_angle(px, py), WithinAbs(-kPi / 2, 1e-15));
    CHECK_THAT(directed_angle(px, nx), WithinAbs(kPi, 1e-15));
    CHECK_THROWS_AS(Ray({0, 0}, {1, 1}), std::invalid_argument);
}

TEST_CASE("normalize_angle range", "[geometry]") {
    CHECK(normalize_angle(-kPi) == kPi);
    CHECK(normalize_angle(kPi) == kPi);
    CHECK_THAT(normalize_angle(3 * kPi / 2), WithinAbs(-kPi / 2, 1e-15));
    CHECK_THAT(normalize_positive(-kPi / 2), WithinAbs(3 * kPi / 2, 1e-15));
}

TEST_CASE("distance properties on random inputs", "[geometry][property]") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-10, 10), ang(-kPi, kPi);
    for (int i = 0; i < 2000; ++i) {
        const Point p{u(rng), u(rng)}, q{u(rng), u(rng)};
        const Segment s{{u(rng), u(rng)}, {u(rng), u(rng)}};
        // 1-Lipschitz (triangle inequality).
        CHECK(std::abs(dist_point_segment(p, s) - dist_point_segment(q, s)) <= dist(p, q) + 1e-12);
        // Rigid motion invariance.
        const double th = ang(rng);
        const Vec2 t{u(rng), u(rng)};
        auto move = [&](Point x) { return rotate(x, th) + t; };
        CHECK_THAT(dist_point_segment(move(p), Segment{move(s.a), move(s.b)}),
                   WithinAbs(dist_point_segment(p, s), 1e-10));
    }
}

TEST_CASE("directed angles add modulo 2pi", "[geometry][property]") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int i = 0; i < 2000; ++i) {
        const Vec2 a = polar(ang(rng)), b = polar(ang(rng)), c = polar(ang(rng));
        const double lhs = directed_angle(a, b) + directed_angle(b, c);
        const double diff = normalize_angle(lhs - directed_angle(a, c));
        CHECK(std::abs(diff) < 1e-12);
        const double ab = directed_angle(a, b);
        if (std::abs(std::abs(ab) - kPi) > 1e-9) CHECK_THAT(directed_angle(b, a), WithinAbs(-ab, 1e-14));
    }
}

TEST_CASE("remove_open_disk splits a segment and an arc", "[geometry]") {
    const auto parts = remove_open_disk(Segment{{0, 0}, {4, 0}}, {2, 0}, 1.0);
    REQUIRE(parts.size() == 2);
    CHECK_THAT(primitive_length(parts[0]), WithinAbs(1.0, 1e-14));
    CHECK_THAT(primitive_length(parts[1]), WithinAbs(1.0, 1e-14));

    const CircularArc half{{0, 0}, 1.0, 0.0, kPi, Orientation::CounterClockwise};
    const auto arcs = remove_open_disk(half, {0, 1}, 2.0 * std::sin(kPi / 8));
    REQUIRE(arcs.size() == 2);
    CHECK_THAT(primitive_length(arcs[0]) + primitive_length(arcs[1]), WithinAbs(kPi / 2, 1e-12));

    CHECK(remove_open_disk(Segment{{0, 0}, {1, 0}}, {0.5, 0}, 5.0).empty());
    CHECK(remove_open_disk(Segment{{0, 0}, {1, 0}}, {0.5, 3}, 1.0).size() == 1);
}

TEST_CASE("line and circle intersections", "[geometry]") {
    const auto ts = line_circle_params({-2, 0}, {1, 0}, {0, 0}, 1.0);
    REQUIRE(ts.size() == 2);
    CHECK_THAT(ts[0], WithinAbs(1.0, 1e-15));
    CHECK_THAT(ts[1], WithinAbs(3.0, 1e-15));
    CHECK(circle_circle_points({0, 0}, 1.0, {3, 0}, 1.0).empty());
    const auto pts = circle_circle_points({0, 0}, 1.0, {1, 0}, 1.0);
    REQUIRE(pts.size() == 2);
    CHECK_THAT(pts[0].x, WithinAbs(0.5, 1e-15));
    CHECK_THAT(std::abs(pts[0].y), WithinAbs(std::sqrt(3.0) / 2, 1e-15));
}

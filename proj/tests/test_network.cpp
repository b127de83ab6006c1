#include <catch_amalgamated.hpp>

#include <random>

#include "mdm/network.hpp"

using namespace mdm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

EmbeddedNetwork full_inner_loop(const ConvexCurve& M, double r) {
    auto inner = std::make_shared<const ConvexCurve>(M.offset_inward(r));
    EmbeddedNetwork net;
    const auto v = net.add_vertex(inner->point(0.0));
    net.mr_arcs.push_back({CurveArc{0.0, inner->arc_length()}, v, v});
    net.arc_curve = inner;
    return net;
}

}  // namespace

TEST_CASE("length of segments and arcs", "[network]") {
    EmbeddedNetwork seg;
    seg.add_edge(seg.add_vertex({0, 0}), seg.add_vertex({3, 4}));
    CHECK_THAT(length(seg), WithinAbs(5.0, 1e-15));

    const auto M = ConvexCurve::circle({0, 0}, 5.0);
    const auto loop = full_inner_loop(M, 1.0);
    CHECK_THAT(length(loop), WithinRel(8.0 * kPi, 1e-14));
    CHECK(has_loop(loop));
    CHECK(is_connected(loop));
}

TEST_CASE("energy examples", "[network]") {
    const auto M = ConvexCurve::circle({0, 0}, 5.0);
    EmbeddedNetwork centre;
    centre.add_vertex({0, 0});
    CHECK_THAT(energy(centre, M, 1000), WithinAbs(5.0, 1e-12));

    CHECK_THAT(energy(full_inner_loop(M, 1.0), M, 1000), WithinAbs(1.0, 1e-12));

    // M itself as the degenerate erosion.
    CHECK(energy(full_inner_loop(M, 0.0), M, 1000) < 1e-12);

    CHECK(std::isinf(energy(EmbeddedNetwork{}, M, 100)));
    CHECK_THROWS_AS(energy(centre, M, 4), std::invalid_argument);
}

TEST_CASE("connectivity, loops and degrees", "[network]") {
    EmbeddedNetwork two;
    two.add_edge(two.add_vertex({0, 0}), two.add_vertex({1, 0}));
    two.add_edge(two.add_vertex({0, 1}), two.add_vertex({1, 1}));
    CHECK_FALSE(is_connected(two));
    CHECK_FALSE(has_loop(two));

    EmbeddedNetwork tri;
    const auto a = tri.add_vertex({0, 0}), b = tri.add_vertex({1, 0}), c = tri.add_vertex({0, 1});
    tri.add_edge(a, b);
    tri.add_edge(b, c);
    CHECK(is_connected(tri));
    CHECK_FALSE(has_loop(tri));
    CHECK(degrees(tri) == std::vector<int>{1, 2, 1});
    tri.add_edge(c, a);
    CHECK(has_loop(tri));

    // Coincident vertices are identified.
    EmbeddedNetwork glued;
    const auto g0 = glued.add_vertex({0, 0});
    const auto g1 = glued.add_vertex({1, 0});
    const auto g2 = glued.add_vertex({1, 0});
    const auto g3 = glued.add_vertex({2, 0});
    glued.add_edge(g0, g1);
    glued.add_edge(g2, g3);
    CHECK(is_connected(glued));
    CHECK(degrees(glued)[1] == 2);
}

TEST_CASE("validation finds crossings and bad edges", "[network]") {
    EmbeddedNetwork x;
    x.add_edge(x.add_vertex({-1, -1}), x.add_vertex({1, 1}));
    x.add_edge(x.add_vertex({-1, 1}), x.add_vertex({1, -1}));
    CHECK(validate_network(x).size() == 1);

    EmbeddedNetwork t;
    const auto a = t.add_vertex({0, 0});
    t.add_edge(a, t.add_vertex({1, 0}));
    t.add_edge(a, t.add_vertex({0, 1}));
    CHECK(validate_network(t).empty());

    EmbeddedNetwork bad;
    bad.add_vertex({0, 0});
    bad.add_edge(0, 0);
    bad.add_edge(0, 7);
    CHECK(validate_network(bad).size() == 2);
}

TEST_CASE("energy is monotone under adding pieces and length is additive", "[network][property]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    const auto M = ConvexCurve::smoothed_polygon({{-5, -4}, {5, -4}, {4, 4}, {-4, 5}}, 1.5);
    for (int trial = 0; trial < 200; ++trial) {
        EmbeddedNetwork a, b;
        a.add_edge(a.add_vertex({u(rng), u(rng)}), a.add_vertex({u(rng), u(rng)}));
        b.add_edge(b.add_vertex({u(rng), u(rng)}), b.add_vertex({u(rng), u(rng)}));
        const auto ab = merge(a, b);
        CHECK(energy(ab, M, 512) <= energy(a, M, 512) + 1e-12);
        CHECK_THAT(length(ab), WithinAbs(length(a) + length(b), 1e-12));
    }
}

TEST_CASE("sampled energy is within its slack of the exact value", "[network][oracle]") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-3, 3);
    const auto M = ConvexCurve::stadium(6.0, 2.0, {-3, 0});
    for (int trial = 0; trial < 50; ++trial) {
        EmbeddedNetwork net;
        net.add_edge(net.add_vertex({u(rng), u(rng) / 3}), net.add_vertex({u(rng), u(rng) / 3}));
        const auto rep = energy_report(net, M, 256);
        const double dense = energy(net, M, 100000);
        CHECK(rep.value <= dense + 0.5 * M.arc_length() / 100000 + 1e-12);
        CHECK(dense <= rep.value + rep.slack + 1e-12);
    }
}

TEST_CASE("sample density comes from the environment", "[network]") {
    CHECK(default_samples(1234) > 0);
}

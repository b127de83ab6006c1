#include <catch_amalgamated.hpp>

#include "mdm/horseshoe.hpp"
#include "mdm/steiner.hpp"
#include "oracles.hpp"

using namespace mdm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("symmetric horseshoe on a circle covers", "[horseshoe]") {
    const auto M = ConvexCurve::circle({0, 0}, 5.0);
    const double r = 0.9;
    const auto h = build_horseshoe(M, r, {0.0, 2.0, 2.0});
    const auto net = horseshoe_network(M, h);
    const auto prims = primitives(net);
    const auto rep = covers(prims, M, CurveArc{0.0, M.arc_length()}, r, 100000);
    CHECK(rep.covered);
    CHECK(rep.worst_dist <= r + rep.slack);
    CHECK(is_connected(net));
    CHECK_FALSE(has_loop(net));
    CHECK_THAT(dist(h.tip_left, h.A), WithinAbs(r, 1e-12));
    CHECK_THAT(dist(h.tip_right, h.A), WithinAbs(r, 1e-12));
    // Tangent at both arc ends.
    const auto inner = *net.arc_curve;
    CHECK(std::abs(directed_angle(inner.at(h.arc.s_end()).tangent, h.tangent_left.direction())) < 1e-9);
    CHECK(std::abs(directed_angle(h.tangent_right.direction(), inner.at(h.arc.s_start).tangent)) < 1e-9);
    CHECK_THAT(h.length(), WithinAbs(length(net), 1e-12));
}

TEST_CASE("degenerate and oversized gaps are rejected", "[horseshoe]") {
    const auto M = ConvexCurve::circle({0, 0}, 5.0);
    // Tangents shrink with the gap and vanish in the limit.
    double prev = 1e9;
    for (double g : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const auto h = build_horseshoe(M, 0.9, {0.0, g, g});
        const double tangents = h.tangent_left.length() + h.tangent_right.length();
        CHECK(tangents < prev);
        prev = tangents;
    }
    CHECK(prev < 1e-3);
    CHECK_THROWS_AS(build_horseshoe(M, 0.9, {0.0, 6.0, 6.0}), InfeasibleGap);
    CHECK_THROWS_AS(build_horseshoe(M, 0.9, {0.0, 0.0, 2.0}), InfeasibleGap);
    CHECK_THROWS_AS(build_horseshoe(M, 5.0, {0.0, 2.0, 2.0}), std::invalid_argument);
}

TEST_CASE("optimal horseshoe on a circle", "[horseshoe]") {
    const auto M = ConvexCurve::circle({0, 0}, 5.0);
    const double r = 0.9;
    const auto search = search_horseshoes(M, r);
    const auto& h = search.best;
    CHECK(h.within_theorem_regime);
    CHECK(h.length() < kTwoPi * 4.1);
    CHECK_THAT(h.gap.left, WithinAbs(h.gap.right, 1e-12));
    CHECK(search.local_minima.size() == 1);
    // Frozen reference from this construction.
    CHECK_THAT(h.length(), WithinAbs(24.687735442085, 1e-8));

    const double L = M.arc_length(), d = 1e-6 * L;
    for (double s : {-d, d}) {
        const auto side = build_horseshoe(M, r, {h.gap.center, h.gap.left + s, h.gap.right + s});
        CHECK(side.length() >= h.length() - 1e-12);
    }
    // Rotation of M does not change the length.
    const auto moved = ConvexCurve::circle({3, -2}, 5.0);
    CHECK_THAT(optimal_horseshoe(moved, r).length(), WithinAbs(h.length(), 1e-9));
    const auto turned = build_horseshoe(M, r, {7.3, h.gap.left, h.gap.right});
    CHECK_THAT(turned.length(), WithinAbs(h.length(), 1e-9));
}

TEST_CASE("optimal horseshoe passes structural checks", "[horseshoe]") {
    const auto M = ConvexCurve::circle({0, 0}, 5.0);
    const double r = 0.9;
    const auto net = horseshoe_network(M, optimal_horseshoe(M, r));
    const auto rep = verify_horseshoe_structure(net, M, r);
    CHECK(rep.passed);
    CHECK(rep.failures.empty());
    CHECK(rep.arcs == 1);
    CHECK(rep.tangent_segments == 2);
    CHECK(rep.coverage_excess < 1e-12);

    const auto g = component_graph(net, M, r);
    CHECK(g.is_path());
    CHECK(g.count_kind(GraphNode::Kind::Arc) == 1);
    CHECK(g.count_kind(GraphNode::Kind::Component) == 2);
}

TEST_CASE("horseshoe on a short stadium", "[horseshoe]") {
    const auto S = ConvexCurve::stadium(1.0, 1.0);
    const double r = 0.15;
    const auto h = optimal_horseshoe(S, r);
    CHECK(h.within_theorem_regime);
    const auto net = horseshoe_network(S, h);
    CHECK(covers_exactly(primitives(net), S, r));
    const auto rep = verify_horseshoe_structure(net, S, r);
    CHECK(rep.passed);
    for (const auto& f : rep.failures) UNSCOPED_INFO(f);
}

TEST_CASE("structure check rejects loops and branch points", "[horseshoe]") {
    const auto M = ConvexCurve::circle({0, 0}, 5.0);
    auto inner = std::make_shared<const ConvexCurve>(M.offset_inward(1.0));
    EmbeddedNetwork loop;
    const auto v = loop.add_vertex(inner->point(0.0));
    loop.mr_arcs.push_back({CurveArc{0.0, inner->arc_length()}, v, v});
    loop.arc_curve = inner;
    const auto rep = verify_horseshoe_structure(loop, M, 1.0);
    CHECK_FALSE(rep.passed);
    CHECK(std::find(rep.failures.begin(), rep.failures.end(), "has a loop") != rep.failures.end());
    CHECK(std::find(rep.failures.begin(), rep.failures.end(), "no tangent segments") != rep.failures.end());

    const auto S = ConvexCurve::stadium(39.2, 1.0);
    const auto comp = stadium_competitor(39.2, 0.98);
    const auto rs = verify_horseshoe_structure(comp, S, 0.98);
    CHECK_FALSE(rs.passed);
    CHECK(std::find(rs.failures.begin(), rs.failures.end(), "contains Steiner branch points") != rs.failures.end());
}

TEST_CASE("stadium competitor", "[horseshoe][stadium]") {
    const double t = 39.2, r = 0.98;
    const auto S = ConvexCurve::stadium(t, 1.0);
    const auto comp = stadium_competitor(t, r);
    CHECK(comp.vertices.size() == 21 + 20 + 20 + 4);
    CHECK(comp.edges.size() == 64);
    CHECK(is_connected(comp));
    CHECK_FALSE(has_loop(comp));
    CHECK(covers_exactly(primitives(comp), S, r));
    CHECK(energy(comp, S, 100000) <= r);

    // Independent length: descend each tripod from a poor start, add the caps.
    double oracle_len = 4.0 * std::sqrt(2.0);
    for (int k = 0; k < 20; ++k) {
        EmbeddedNetwork tri;
        tri.add_vertex({2 * k * r, 1});
        tri.add_vertex({(2 * k + 1) * r, -1});
        tri.add_vertex({(2 * k + 2) * r, 1});
        tri.add_vertex({(2 * k + 1) * r, 0.5});
        for (std::size_t i = 0; i < 3; ++i) tri.add_edge(3, i);
        oracle_len += oracle::descend_length(tri, {false, false, false, true});
    }
    CHECK_THAT(length(comp), WithinRel(oracle_len, 1e-9));
    CHECK_THAT(length(comp), WithinAbs(79.605050078, 1e-6));

    CHECK_THROWS_AS(stadium_competitor(41 * r, r), GridMismatch);
    CHECK_THROWS_AS(stadium_competitor(40.5 * r, r), GridMismatch);
    CHECK_THROWS_AS(stadium_competitor(4.0, 1.0), std::invalid_argument);
}

TEST_CASE("horseshoes across the theorem regime", "[horseshoe][property]") {
    const double R = 5.0;
    const auto M = ConvexCurve::circle({0, 0}, R);
    for (int i = 1; i <= 20; ++i) {
        const double r = (R / 4.98) * i / 21.0;
        const auto h = optimal_horseshoe(M, r);
        const auto net = horseshoe_network(M, h);
        const auto rep = verify_horseshoe_structure(net, M, r);
        CHECK(rep.passed);
        CHECK(h.length() < kTwoPi * (R - r));
        const auto td = turning_decomposition(net, M, r);
        CHECK_THAT(td.total, WithinAbs(kTwoPi, 1e-6));
        for (const auto& n : td.nodes) CHECK_THAT(n.margin, WithinAbs(0.0, 1e-6));
    }
}

#include <catch_amalgamated.hpp>

#include <random>

#include "mdm/horseshoe.hpp"
#include "mdm/steiner.hpp"
#include "oracles.hpp"

using namespace mdm;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double min_branch_angle_error(const EmbeddedNetwork& net, std::size_t first_branch) {
    double worst = 0.0;
    for (std::size_t v = first_branch; v < net.vertices.size(); ++v) {
        std::vector<Vec2> d;
        for (const auto& e : net.edges) {
            if (e.a == v) d.push_back(unit(net.vertices[e.b] - net.vertices[v]));
            if (e.b == v) d.push_back(unit(net.vertices[e.a] - net.vertices[v]));
        }
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j)
                worst = std::max(worst, std::abs(std::acos(std::clamp(dot(d[i], d[j]), -1.0, 1.0)) - 2 * kPi / 3));
    }
    return worst;
}

double oracle_length(EmbeddedNetwork net, std::size_t n_terminals) {
    std::vector<bool> free(net.vertices.size(), false);
    for (std::size_t v = n_terminals; v < free.size(); ++v) {
        free[v] = true;
        // Start away from the answer.
        net.vertices[v] = net.vertices[v] + Vec2{0.05, -0.03};
    }
    return oracle::descend_length(net, free);
}

}  // namespace

TEST_CASE("fermat point of an equilateral triangle", "[steiner]") {
    const Point a{0, 0}, b{1, 0}, c{0.5, std::sqrt(3.0) / 2};
    const auto res = fermat_point(a, b, c);
    REQUIRE(res.steiner_point);
    CHECK_THAT(length(res.tree), WithinAbs(std::sqrt(3.0), 1e-12));
    CHECK(dist(*res.steiner_point, Point{0.5, std::sqrt(3.0) / 6}) < 1e-12);
    CHECK(min_branch_angle_error(res.tree, 3) < 1e-9);

    EmbeddedNetwork star;
    for (Point p : {a, b, c}) star.add_vertex(p);
    const auto s = star.add_vertex({0.5, 0.5});
    for (std::size_t k = 0; k < 3; ++k) star.add_edge(s, k);
    CHECK_THAT(oracle::descend_length(star, {false, false, false, true}), WithinAbs(std::sqrt(3.0), 1e-8));
}

TEST_CASE("fermat point at a wide angle and on a line", "[steiner]") {
    // 150 degrees at the origin.
    const Point o{0, 0}, p{1, 0}, q = polar(5 * kPi / 6);
    const auto res = fermat_point(p, o, q);
    CHECK_FALSE(res.steiner_point);
    CHECK(res.tree.edges.size() == 2);
    CHECK_THAT(length(res.tree), WithinAbs(2.0, 1e-12));
    CHECK(degrees(res.tree)[1] == 2);

    const auto line = fermat_point({0, 0}, {3, 0}, {1, 0});
    CHECK_FALSE(line.steiner_point);
    CHECK_THAT(length(line.tree), WithinAbs(3.0, 1e-12));

    CHECK_THROWS_AS(fermat_point({0, 0}, {0, 0}, {1, 1}), std::invalid_argument);
}

TEST_CASE("fermat tree beats every two-edge spanning tree", "[steiner][property]") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int trial = 0; trial < 2000; ++trial) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        const double len = length(fermat_point(a, b, c).tree);
        const double ab = dist(a, b), bc = dist(b, c), ca = dist(c, a);
        CHECK(len <= std::min({ab + bc, bc + ca, ca + ab}) + 1e-12);
    }
}

TEST_CASE("four-point full Steiner trees on the unit square", "[steiner]") {
    const std::vector<Point> sq{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const auto horizontal = local_min_network(sq, {SteinerType::FullSteiner4, {0, 1, 2, 3}});
    CHECK_THAT(length(horizontal), WithinAbs(1.0 + std::sqrt(3.0), 1e-12));
    CHECK(horizontal.vertices.size() == 6);
    CHECK(std::abs(horizontal.vertices[4].y - 0.5) < 1e-12);
    CHECK(std::abs(horizontal.vertices[5].y - 0.5) < 1e-12);
    CHECK(min_branch_angle_error(horizontal, 4) < 1e-9);
    CHECK_THAT(oracle_length(horizontal, 4), WithinRel(1.0 + std::sqrt(3.0), 1e-8));

    const auto vertical = local_min_network(sq, {SteinerType::FullSteiner4, {0, 2, 1, 3}});
    CHECK_THAT(length(vertical), WithinAbs(1.0 + std::sqrt(3.0), 1e-12));

    // Diagonal pairing cannot be realized without crossing.
    CHECK_THROWS_AS(local_min_network(sq, {SteinerType::FullSteiner4, {0, 3, 1, 2}}), Infeasible);

    const auto best = shortest_local_min_network(sq);
    REQUIRE(best);
    CHECK_THAT(best->length, WithinAbs(1.0 + std::sqrt(3.0), 1e-12));
    CHECK(best->topo.type == SteinerType::FullSteiner4);
}

TEST_CASE("stadium tripod length tends to 2 + sqrt 3", "[steiner]") {
    const double r = 1.0 - 1e-9;
    const auto res = fermat_point({0, 1}, {r, -1}, {2 * r, 1});
    REQUIRE(res.steiner_point);
    CHECK_THAT(length(res.tree), WithinAbs(2.0 + std::sqrt(3.0), 1e-6));
}

TEST_CASE("every type checks its angle conditions", "[steiner]") {
    const std::vector<Point> acute{{0, 0}, {1, 0}, {0.4, 1}};
    CHECK_NOTHROW(local_min_network(acute, {SteinerType::Tripod3, {}}));
    CHECK_THROWS_AS(local_min_network(acute, {SteinerType::Path3, {}}), Infeasible);

    const std::vector<Point> wide{{-1, 0}, {0, 0.1}, {1, 0}};
    CHECK_THROWS_AS(local_min_network(wide, {SteinerType::Tripod3, {}}), Infeasible);
    CHECK_NOTHROW(local_min_network(wide, {SteinerType::Path3, {}}));

    const std::vector<Point> zigzag{{0, 0}, {1, 0.1}, {2, 0}, {3, 0.1}};
    CHECK_NOTHROW(local_min_network(zigzag, {SteinerType::Path4, {}}));

    // Star with three exact 2pi/3 angles around a terminal.
    const std::vector<Point> star{{0, 0}, polar(0.1), polar(0.1 + 2 * kPi / 3), polar(0.1 + 4 * kPi / 3)};
    CHECK_NOTHROW(local_min_network(star, {SteinerType::Cross4, {}}));
    const std::vector<Point> bent{{0, 0}, polar(0.1), polar(0.3 + 2 * kPi / 3), polar(0.1 + 4 * kPi / 3)};
    CHECK_THROWS_AS(local_min_network(bent, {SteinerType::Cross4, {}}), Infeasible);

    // Tripod on three points, then a straight continuation to the fourth.
    const std::vector<Point> t4{{0, 0}, {1, 0}, {0.5, 0.8}, {0.5, 2.0}};
    const auto tri = local_min_network(t4, {SteinerType::Tripod4, {}});
    CHECK(tri.vertices.size() == 5);
    CHECK(validate_angles(tri).empty());

    CHECK_THROWS_AS(local_min_network(t4, {SteinerType::Seg2, {}}), std::invalid_argument);
    CHECK(all_steiner_types().size() == 7);
    int branches = 0;
    for (auto t : all_steiner_types()) branches += branch_count(t);
    CHECK(branches == 4);
}

TEST_CASE("random four-point full trees agree with descent", "[steiner][oracle]") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1, 1);
    int feasible = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const std::vector<Point> pts{{-2 + u(rng) * 0.5, -1 + u(rng) * 0.5},
                                     {-2 + u(rng) * 0.5, 1 + u(rng) * 0.5},
                                     {2 + u(rng) * 0.5, -1 + u(rng) * 0.5},
                                     {2 + u(rng) * 0.5, 1 + u(rng) * 0.5}};
        try {
            const auto net = local_min_network(pts, {SteinerType::FullSteiner4, {}});
            ++feasible;
            CHECK(min_branch_angle_error(net, 4) < 1e-9);
            CHECK_THAT(oracle_length(net, 4), WithinRel(length(net), 1e-6));
        } catch (const Infeasible&) {
        }
    }
    CHECK(feasible > 1500);
}

TEST_CASE("small moves of branch points never shorten the tree", "[steiner][property]") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 300; ++trial) {
        const Point a{u(rng) - 2, u(rng)}, b{u(rng) + 2, u(rng)}, c{u(rng), u(rng) + 3};
        const auto res = fermat_point(a, b, c);
        if (!res.steiner_point) continue;
        const double base = length(res.tree);
        for (int k = 0; k < 8; ++k) {
            auto moved = res.tree;
            const Vec2 dir = polar(kTwoPi * k / 8);
            moved.vertices[3] = moved.vertices[3] + 1e-4 * dir;
            // First-order stationary: the change is second order.
            const double d = (length(moved) - base) / 1e-4;
            CHECK(d > -1e-6);
            CHECK(d < 1e-3);
        }
    }
}

TEST_CASE("angle validation", "[steiner]") {
    const auto res = fermat_point({0, 0}, {1, 0}, {0.5, 0.9});
    CHECK(validate_angles(res.tree).empty());

    EmbeddedNetwork v;
    const auto o = v.add_vertex({0, 0});
    v.add_edge(o, v.add_vertex({1, 0}));
    v.add_edge(o, v.add_vertex({0, 1}));
    const auto bad = validate_angles(v);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].vertex == o);
    CHECK_THAT(bad[0].angle, WithinAbs(kPi / 2, 1e-12));

    const auto M = ConvexCurve::circle({0, 0}, 5.0);
    const auto h = optimal_horseshoe(M, 0.9);
    CHECK(validate_angles(horseshoe_network(M, h), 1e-6).empty());
}

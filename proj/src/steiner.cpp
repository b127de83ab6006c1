#include "mdm/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mdm {

namespace {

constexpr double kBranchAngle = 2.0 * kPi / 3.0;
constexpr double kAngleTol = 1e-9;

double angle_at(Point v, Point a, Point b) {
    const Vec2 u = a - v, w = b - v;
    return std::atan2(std::abs(cross(u, w)), dot(u, w));
}

void require_distinct(std::span<const Point> pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            if (dist(pts[i], pts[j]) <= 1e-12 * (1.0 + norm(pts[i])))
                throw std::invalid_argument("terminals must be distinct");
}

// Torricelli point of a triangle whose angles are all below 2pi/3.
Point torricelli(Point p1, Point p2, Point p3) {
    const double a = dist(p2, p3), b = dist(p1, p3), c = dist(p1, p2);
    const double A = angle_at(p1, p2, p3), B = angle_at(p2, p1, p3), C = angle_at(p3, p1, p2);
    const double w1 = a / std::sin(A + kPi / 3.0);
    const double w2 = b / std::sin(B + kPi / 3.0);
    const double w3 = c / std::sin(C + kPi / 3.0);
    const double s = w1 + w2 + w3;
    Point x{(w1 * p1.x + w2 * p2.x + w3 * p3.x) / s, (w1 * p1.y + w2 * p2.y + w3 * p3.y) / s};
    // A few Weiszfeld steps remove the rounding left by the closed form.
    for (int it = 0; it < 3; ++it) {
        double sw = 0.0;
        Vec2 acc{0.0, 0.0};
        for (Point p : {p1, p2, p3}) {
            const double d = dist(x, p);
            if (d < 1e-300) return x;
            sw += 1.0 / d;
            acc = acc + (1.0 / d) * Vec2{p.x, p.y};
        }
        x = Point{acc.x / sw, acc.y / sw};
    }
    return x;
}

bool has_wide_angle(Point p1, Point p2, Point p3) {
    return angle_at(p1, p2, p3) >= kBranchAngle || angle_at(p2, p1, p3) >= kBranchAngle ||
           angle_at(p3, p1, p2) >= kBranchAngle;
}

EmbeddedNetwork with_terminals(std::span<const Point> terminals) {
    EmbeddedNetwork net;
    for (Point p : terminals) net.add_vertex(p);
    return net;
}

void require_planar(const EmbeddedNetwork& net, const std::string& what) {
    if (!validate_network(net).empty()) throw Infeasible(what + ": edges cross or degenerate");
}

void require_angles(const EmbeddedNetwork& net, const std::string& what) {
    if (!validate_angles(net, kAngleTol).empty()) throw Infeasible(what + ": an angle is below 2pi/3");
}

}  // namespace

std::string to_string(SteinerType type) {
    switch (type) {
        case SteinerType::Seg2: return "Seg2";
        case SteinerType::Path3: return "Path3";
        case SteinerType::Tripod3: return "Tripod3";
        case SteinerType::FullSteiner4: return "FullSteiner4";
        case SteinerType::Tripod4: return "Tripod4";
        case SteinerType::Path4: return "Path4";
        case SteinerType::Cross4: return "Cross4";
    }
    return "unknown";
}

int terminal_count(SteinerType type) {
    switch (type) {
        case SteinerType::Seg2: return 2;
        case SteinerType::Path3:
        case SteinerType::Tripod3: return 3;
        default: return 4;
    }
}

int branch_count(SteinerType type) {
    switch (type) {
        case SteinerType::Tripod3:
        case SteinerType::Tripod4: return 1;
        case SteinerType::FullSteiner4: return 2;
        default: return 0;
    }
}

std::array<SteinerType, 7> all_steiner_types() {
    return {SteinerType::Seg2,         SteinerType::Path3, SteinerType::Tripod3, SteinerType::FullSteiner4,
            SteinerType::Tripod4,      SteinerType::Path4, SteinerType::Cross4};
}

FermatResult fermat_point(Point p1, Point p2, Point p3) {
    const std::array<Point, 3> pts{p1, p2, p3};
    require_distinct(pts);
    FermatResult res;
    res.tree = with_terminals(pts);
    const double scale = std::max({dist(p1, p2), dist(p2, p3), dist(p1, p3)});
    if (std::abs(cross(p2 - p1, p3 - p1)) <= 1e-12 * scale * scale) {
        // Collinear: the middle point splits the covering segment.
        std::array<std::size_t, 3> idx{0, 1, 2};
        const Vec2 d = unit(pts[1] - pts[0]);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return dot(pts[a], d) < dot(pts[b], d); });
        res.tree.add_edge(idx[0], idx[1]);
        res.tree.add_edge(idx[1], idx[2]);
        return res;
    }
    for (std::size_t k = 0; k < 3; ++k) {
        const Point v = pts[k], a = pts[(k + 1) % 3], b = pts[(k + 2) % 3];
        if (angle_at(v, a, b) >= kBranchAngle) {
            res.tree.add_edge(k, (k + 1) % 3);
            res.tree.add_edge(k, (k + 2) % 3);
            return res;
        }
    }
    const Point s = torricelli(p1, p2, p3);
    const std::size_t c = res.tree.add_vertex(s);
    for (std::size_t k = 0; k < 3; ++k) res.tree.add_edge(c, k);
    res.steiner_point = s;
    return res;
}

EmbeddedNetwork local_min_network(std::span<const Point> terminals, const SteinerTopology& topo) {
    const int n = terminal_count(topo.type);
    if (static_cast<int>(terminals.size()) != n)
        throw std::invalid_argument(to_string(topo.type) + " needs " + std::to_string(n) + " terminals");
    require_distinct(terminals);
    std::vector<std::size_t> ord = topo.order;
    if (ord.empty()) {
        ord.resize(terminals.size());
        std::iota(ord.begin(), ord.end(), 0);
    }
    {
        auto sorted = ord;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size(); ++i)
            if (sorted.size() != terminals.size() || sorted[i] != i)
                throw std::invalid_argument("terminal order is not a permutation");
    }
    auto T = [&](std::size_t k) { return terminals[ord[k]]; };
    const std::string name = to_string(topo.type);
    EmbeddedNetwork net = with_terminals(terminals);

    switch (topo.type) {
        case SteinerType::Seg2:
            net.add_edge(ord[0], ord[1]);
            break;
        case SteinerType::Path3:
        case SteinerType::Path4:
            for (int k = 0; k + 1 < n; ++k) net.add_edge(ord[k], ord[k + 1]);
            break;
        case SteinerType::Cross4:
            for (int k = 1; k < 4; ++k) net.add_edge(ord[0], ord[k]);
            break;
        case SteinerType::Tripod3:
        case SteinerType::Tripod4: {
            if (has_wide_angle(T(0), T(1), T(2))) throw Infeasible(name + ": triangle has an angle of at least 2pi/3");
            const std::size_t s = net.add_vertex(torricelli(T(0), T(1), T(2)));
            for (int k = 0; k < 3; ++k) net.add_edge(s, ord[k]);
            if (topo.type == SteinerType::Tripod4) net.add_edge(ord[2], ord[3]);
            break;
        }
        case SteinerType::FullSteiner4: {
            const Point a = T(0), b = T(1), c = T(2), d = T(3);
            // Apex of the equilateral triangle on [ab] away from the other pair.
            const Point mid = a + 0.5 * (b - a);
            const Vec2 h = (std::sqrt(3.0) / 2.0) * perp_ccw(b - a);
            const Point far = c + 0.5 * (d - c);
            const Point e = dot(far - mid, h) > 0.0 ? mid - h : mid + h;
            if (has_wide_angle(e, c, d)) throw Infeasible(name + ": reduced triangle has a wide angle");
            const Point s2 = torricelli(e, c, d);
            const Point o = Point{(a.x + b.x + e.x) / 3.0, (a.y + b.y + e.y) / 3.0};
            const double span = dist(e, s2);
            const Vec2 u = (s2 - e) / span;
            const double along = 2.0 * dot(o - e, u);
            if (!(along > 0.0 && along < span)) throw Infeasible(name + ": first branch point leaves its arc");
            const Point s1 = e + along * u;
            const std::size_t i1 = net.add_vertex(s1);
            const std::size_t i2 = net.add_vertex(s2);
            net.add_edge(i1, ord[0]);
            net.add_edge(i1, ord[1]);
            net.add_edge(i1, i2);
            net.add_edge(i2, ord[2]);
            net.add_edge(i2, ord[3]);
            break;
        }
    }
    require_planar(net, name);
    require_angles(net, name);
    return net;
}

std::optional<SteinerChoice> shortest_local_min_network(std::span<const Point> terminals) {
    const std::size_t n = terminals.size();
    if (n < 2 || n > 4) throw std::invalid_argument("shortest_local_min_network: need 2 to 4 terminals");
    std::optional<SteinerChoice> best;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (SteinerType type : all_steiner_types()) {
            if (terminal_count(type) != static_cast<int>(n)) continue;
            SteinerTopology topo{type, perm};
            try {
                auto net = local_min_network(terminals, topo);
                const double len = length(net);
                if (!best || len < best->length - 1e-12) best = SteinerChoice{std::move(net), topo, len};
            } catch (const Infeasible&) {
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<AngleViolation> validate_angles(const EmbeddedNetwork& net, double tol) {
    const auto cls = vertex_classes(net);
    std::vector<std::vector<Vec2>> dirs(net.vertices.size());
    for (const auto& e : net.edges) {
        const Point a = net.vertices[e.a], b = net.vertices[e.b];
        if (cls[e.a] == cls[e.b]) continue;
        dirs[cls[e.a]].push_back(unit(b - a));
        dirs[cls[e.b]].push_back(unit(a - b));
    }
    if (net.arc_curve) {
        for (const auto& m : net.mr_arcs) {
            const auto pieces = net.arc_curve->arc_primitives(m.arc);
            if (pieces.empty() || m.arc.length <= 0.0) continue;
            dirs[cls[m.v0]].push_back(primitive_start_tangent(pieces.front()));
            dirs[cls[m.v1]].push_back(-1.0 * primitive_end_tangent(pieces.back()));
        }
    }
    std::vector<AngleViolation> out;
    for (std::size_t v = 0; v < dirs.size(); ++v) {
        if (dirs[v].size() < 2) continue;
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dirs[v].size(); ++i)
            for (std::size_t j = i + 1; j < dirs[v].size(); ++j)
                worst = std::min(worst, std::atan2(std::abs(cross(dirs[v][i], dirs[v][j])), dot(dirs[v][i], dirs[v][j])));
        if (worst < kBranchAngle - tol) out.push_back({v, worst});
    }
    return out;
}

}  // namespace mdm

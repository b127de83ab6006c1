#include "mdm/analysis.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>

namespace mdm {

// ---- turning ---------------------------------------------------------------

double primitive_turning(const Primitive& prim) {
    if (std::holds_alternative<Segment>(prim)) return 0.0;
    return -std::get<CircularArc>(prim).signed_sweep();
}

double turning(std::span<const Primitive> pieces, bool closed) {
    std::vector<const Primitive*> live;
    for (const auto& p : pieces)
        if (primitive_length(p) > 1e-15) live.push_back(&p);
    double total = 0.0;
    for (std::size_t i = 0; i < live.size(); ++i) {
        total += primitive_turning(*live[i]);
        const bool last = i + 1 == live.size();
        if (last && !closed) break;
        const Primitive& next = *live[last ? 0 : i + 1];
        if (dist(primitive_end(*live[i]), primitive_start(next)) > 1e-9)
            throw NonContiguousPieces("turning: consecutive pieces do not share an endpoint");
        total += directed_angle(primitive_end_tangent(*live[i]), primitive_start_tangent(next));
    }
    return total;
}

// ---- chord bound -----------------------------------------------------------

double chord_length_bound(const ConvexCurve& M, double r) {
    const double R = M.min_curvature_radius();
    if (!(r > 0.0) || !(r < R)) throw std::invalid_argument("chord_length_bound: need 0 < r < R");
    if (M.kind() == CurveKind::Circle) return 2.0 * r * std::sqrt(1.0 - r * r / (4.0 * R * R));
    return 2.0 * r;
}

// ---- energetic points --------------------------------------------------------

std::string to_string(PointClass::Label label) {
    switch (label) {
        case PointClass::Label::NonIsolatedEnergetic: return "non_isolated_energetic";
        case PointClass::Label::IsolatedEnergetic: return "isolated_energetic";
        case PointClass::Label::NonEnergetic: return "non_energetic";
    }
    return "unknown";
}

std::vector<double> default_rho_grid(const ConvexCurve& M) {
    const double R = M.min_curvature_radius();
    return {1e-3 * R, 1e-2 * R, 5e-2 * R};
}

bool removal_uncovers(std::span<const Primitive> prims, const ConvexCurve& M, double r, Point x, double rho,
                      double tol_energy, CurvePoint* witness) {
    std::vector<Primitive> rest;
    rest.reserve(prims.size() + 4);
    for (const auto& p : prims)
        for (auto& q : remove_open_disk(p, x, rho)) rest.push_back(std::move(q));
    const auto gaps = uncovered_arcs(rest, M, r + tol_energy, 0.0);
    if (gaps.empty()) return false;
    if (witness) {
        const auto widest = std::max_element(gaps.begin(), gaps.end(),
                                             [](const CurveArc& a, const CurveArc& b) { return a.length < b.length; });
        *witness = M.at(widest->s_start + 0.5 * widest->length);
    }
    return true;
}

namespace {

bool energetic_on_grid(std::span<const Primitive> prims, const ConvexCurve& M, double r, Point x,
                       std::span<const double> grid, CurvePoint* witness) {
    if (grid.empty()) return false;
    const double tol = 1e-6 * M.min_curvature_radius();
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (!removal_uncovers(prims, M, r, x, grid[i], tol, i == 0 ? witness : nullptr)) return false;
    return true;
}

}  // namespace

PointClass classify_point(const EmbeddedNetwork& net, const ConvexCurve& M, double r, Point x,
                          std::span<const double> rho_grid) {
    const auto prims = primitives(net);
    PointClass pc;
    CurvePoint w;
    if (!energetic_on_grid(prims, M, r, x, rho_grid, &w)) return pc;
    pc.witness = w;
    pc.label = PointClass::Label::IsolatedEnergetic;

    const ConvexCurve Mr = M.offset_inward(r);
    const double R = M.min_curvature_radius();
    if (std::abs(Mr.signed_distance(x)) > 1e-7 * R) return pc;
    // Neighbours along the nearest piece at the smallest removal radius.
    const double h = *std::min_element(rho_grid.begin(), rho_grid.end());
    const auto nearest = std::min_element(prims.begin(), prims.end(), [&](const Primitive& a, const Primitive& b) {
        return dist_point_primitive(x, a) < dist_point_primitive(x, b);
    });
    if (nearest == prims.end()) return pc;
    Point n1, n2;
    if (const auto* s = std::get_if<Segment>(&*nearest)) {
        n1 = closest_point_segment(x - h * s->direction(), *s);
        n2 = closest_point_segment(x + h * s->direction(), *s);
    } else {
        const auto& a = std::get<CircularArc>(*nearest);
        const double th = std::atan2(x.y - a.center.y, x.x - a.center.x);
        n1 = closest_point_arc(a.center + polar(th - h / a.radius, a.radius), a);
        n2 = closest_point_arc(a.center + polar(th + h / a.radius, a.radius), a);
    }
    if (dist(n1, x) < 0.5 * h || dist(n2, x) < 0.5 * h) return pc;
    if (std::abs(Mr.signed_distance(n1)) > 1e-7 * R || std::abs(Mr.signed_distance(n2)) > 1e-7 * R) return pc;
    if (energetic_on_grid(prims, M, r, n1, rho_grid, nullptr) && energetic_on_grid(prims, M, r, n2, rho_grid, nullptr))
        pc.label = PointClass::Label::NonIsolatedEnergetic;
    return pc;
}

PointClass classify_point(const EmbeddedNetwork& net, const ConvexCurve& M, double r, Point x) {
    const auto grid = default_rho_grid(M);
    return classify_point(net, M, r, x, grid);
}

// ---- component graph -------------------------------------------------------

namespace {

constexpr double kJoin = 1e-8;

bool same_point(Point a, Point b) { return dist(a, b) <= kJoin; }

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(b)] = find(a); }

private:
    std::vector<std::size_t> parent_;
};

enum class Zone { Outside, Inside, OnMr };

struct Atom {
    Primitive prim;
    Zone zone;
};

// Fractions of s where it meets the curve Mr.
std::vector<double> crossings_with_curve(const Segment& s, const ConvexCurve& Mr) {
    std::vector<double> ts;
    const double len = s.length();
    if (len == 0.0) return ts;
    const Vec2 d = s.direction();
    for (const auto& piece : Mr.as_primitives()) {
        if (const auto* f = std::get_if<Segment>(&piece)) {
            const double flen = f->length();
            if (flen == 0.0) continue;
            const Vec2 fd = f->direction();
            if (std::abs(cross(d, fd)) < 1e-12) {
                if (std::abs(cross(fd, s.a - f->a)) < 1e-10) {
                    ts.push_back(dot(f->a - s.a, d) / len);
                    ts.push_back(dot(f->b - s.a, d) / len);
                }
                continue;
            }
            if (auto t = line_line_param(s.a, d, f->a, perp_ccw(fd))) {
                const Point p = s.a + *t * d;
                const double u = dot(p - f->a, fd);
                if (u >= -1e-12 && u <= flen + 1e-12) ts.push_back(*t / len);
            }
        } else {
            const auto& a = std::get<CircularArc>(piece);
            for (double t : line_circle_params(s.a, d, a.center, a.radius)) {
                const Point p = s.a + t * d;
                if (a.spans(std::atan2(p.y - a.center.y, p.x - a.center.x))) ts.push_back(t / len);
            }
        }
    }
    std::vector<double> inside;
    for (double t : ts)
        if (t > 1e-12 && t < 1.0 - 1e-12) inside.push_back(t);
    std::sort(inside.begin(), inside.end());
    return inside;
}

Point primitive_mid(const Primitive& p) { return primitive_at(p, 0.5); }

std::pair<Primitive, Primitive> split_at(const Primitive& prim, Point p) {
    if (const auto* s = std::get_if<Segment>(&prim)) return {Segment{s->a, p}, Segment{p, s->b}};
    const auto& a = std::get<CircularArc>(prim);
    const double th = std::atan2(p.y - a.center.y, p.x - a.center.x);
    const double off = a.orientation == Orientation::CounterClockwise ? normalize_positive(th - a.start_angle)
                                                                      : normalize_positive(a.start_angle - th);
    const double u = a.extent() > 0.0 ? std::clamp(off / a.extent(), 0.0, 1.0) : 0.0;
    const double mid = a.angle_at(u);
    return {CircularArc{a.center, a.radius, a.start_angle, mid, a.orientation},
            CircularArc{a.center, a.radius, mid, a.end_angle, a.orientation}};
}

Point closest_on(const Primitive& p, Point x) {
    if (const auto* s = std::get_if<Segment>(&p)) return closest_point_segment(x, *s);
    return closest_point_arc(x, std::get<CircularArc>(p));
}

// Ordered, oriented pieces from `from` to `to` inside a tree-like piece set.
std::vector<Primitive> path_between(std::vector<Primitive> pieces, Point from, Point to) {
    auto ensure_vertex = [&](Point p) {
        for (const auto& q : pieces)
            if (same_point(primitive_start(q), p) || same_point(primitive_end(q), p)) return;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (dist_point_primitive(p, pieces[i]) <= kJoin) {
                auto [a, b] = split_at(pieces[i], p);
                pieces[i] = a;
                pieces.push_back(b);
                return;
            }
        }
        throw NotAPath("path_between: point is not on the component");
    };
    ensure_vertex(from);
    ensure_vertex(to);
    std::vector<Point> verts;
    auto vid = [&](Point p) {
        for (std::size_t i = 0; i < verts.size(); ++i)
            if (same_point(verts[i], p)) return i;
        verts.push_back(p);
        return verts.size() - 1;
    };
    std::vector<std::pair<std::size_t, std::size_t>> ends;
    for (const auto& p : pieces) ends.emplace_back(vid(primitive_start(p)), vid(primitive_end(p)));
    const std::size_t src = vid(from), dst = vid(to);
    if (src == dst) return {};
    std::vector<long> via(verts.size(), -1);
    std::vector<bool> seen(verts.size(), false);
    std::deque<std::size_t> queue{src};
    seen[src] = true;
    while (!queue.empty()) {
        const std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            std::size_t w;
            if (ends[i].first == v) w = ends[i].second;
            else if (ends[i].second == v) w = ends[i].first;
            else continue;
            if (seen[w]) continue;
            seen[w] = true;
            via[w] = static_cast<long>(i);
            queue.push_back(w);
        }
    }
    if (!seen[dst]) throw NotAPath("path_between: endpoints are not connected inside the component");
    std::vector<Primitive> out;
    for (std::size_t v = dst; v != src;) {
        const auto i = static_cast<std::size_t>(via[v]);
        const bool forward = ends[i].second == v;
        out.push_back(forward ? pieces[i] : reversed(pieces[i]));
        v = forward ? ends[i].first : ends[i].second;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

bool touches(const std::vector<Primitive>& pieces, Point p) {
    for (const auto& q : pieces)
        if (same_point(primitive_start(q), p) || same_point(primitive_end(q), p)) return true;
    return false;
}

std::vector<Point> distinct_endpoints(const std::vector<Primitive>& pieces) {
    std::vector<Point> pts;
    auto add = [&](Point p) {
        for (const auto& q : pts)
            if (same_point(p, q)) return;
        pts.push_back(p);
    };
    for (const auto& q : pieces) {
        add(primitive_start(q));
        add(primitive_end(q));
    }
    return pts;
}

CurveArc covered_arc(const std::vector<Primitive>& pieces, const ConvexCurve& M, double r, bool* single) {
    const auto arcs = covered_arcs(pieces, M, r, 1e-9);
    *single = arcs.size() == 1;
    if (arcs.empty()) return CurveArc{0.0, 0.0};
    return *std::max_element(arcs.begin(), arcs.end(),
                             [](const CurveArc& a, const CurveArc& b) { return a.length < b.length; });
}

}  // namespace

double GraphNode::length() const {
    double t = 0.0;
    for (const auto& p : pieces) t += primitive_length(p);
    return t;
}

std::vector<int> ComponentGraph::node_degrees() const {
    std::vector<int> deg(nodes.size(), 0);
    for (const auto& e : edges) {
        ++deg[e.a];
        ++deg[e.b];
    }
    return deg;
}

int ComponentGraph::count_kind(GraphNode::Kind k) const {
    return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [k](const GraphNode& n) { return n.kind == k; }));
}

bool ComponentGraph::is_path() const {
    if (nodes.size() < 2 || edges.size() + 1 != nodes.size()) return false;
    const auto deg = node_degrees();
    int ones = 0;
    for (int d : deg) {
        if (d == 1) ++ones;
        else if (d != 2) return false;
    }
    if (ones != 2) return false;
    DisjointSets ds(nodes.size());
    for (const auto& e : edges) {
        if (e.a == e.b) return false;
        ds.unite(e.a, e.b);
    }
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (ds.find(i) != ds.find(0)) return false;
    return true;
}

std::vector<std::size_t> ComponentGraph::path_order() const {
    if (!is_path()) return {};
    const auto deg = node_degrees();
    std::size_t cur = static_cast<std::size_t>(std::find(deg.begin(), deg.end(), 1) - deg.begin());
    std::vector<std::size_t> order{cur};
    std::vector<bool> used(edges.size(), false);
    while (order.size() < nodes.size()) {
        bool moved = false;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (used[i] || (edges[i].a != cur && edges[i].b != cur)) continue;
            used[i] = true;
            cur = edges[i].a == cur ? edges[i].b : edges[i].a;
            order.push_back(cur);
            moved = true;
            break;
        }
        if (!moved) return {};
    }
    return order;
}

ComponentGraph component_graph(const EmbeddedNetwork& net, const ConvexCurve& M, double r) {
    const ConvexCurve Mr = M.offset_inward(r);
    const double R = M.min_curvature_radius();
    const double band = 1e-9 * R;

    // Quantize vertices near M_r once.
    std::vector<Point> verts = net.vertices;
    for (auto& v : verts) {
        const double sd = Mr.signed_distance(v);
        const double a = std::abs(sd);
        if (a > 0.5 * band && a < 2.0 * band)
            throw AmbiguousCrossing("vertex lies at the edge of the M_r band");
        if (a <= band) v = Mr.point(Mr.project(v));
    }
    auto zone_of = [&](Point p) {
        const double sd = Mr.signed_distance(p);
        if (sd > band) return Zone::Outside;
        if (sd < -band) return Zone::Inside;
        return Zone::OnMr;
    };

    std::vector<Atom> atoms;
    for (const auto& e : net.edges) {
        const Segment s{verts[e.a], verts[e.b]};
        if (s.length() <= kJoin) continue;
        std::vector<double> cuts{0.0};
        for (double t : crossings_with_curve(s, Mr)) cuts.push_back(t);
        cuts.push_back(1.0);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if ((cuts[i + 1] - cuts[i]) * s.length() <= kJoin) continue;
            Segment part{s.at(cuts[i]), s.at(cuts[i + 1])};
            if (cuts[i] > 0.0) part.a = Mr.point(Mr.project(part.a));
            if (cuts[i + 1] < 1.0) part.b = Mr.point(Mr.project(part.b));
            atoms.push_back({part, zone_of(primitive_mid(part))});
        }
    }
    if (!net.mr_arcs.empty()) {
        for (const auto& a : net.mr_arcs)
            for (auto& p : Mr.arc_primitives(a.arc))
                if (primitive_length(p) > kJoin) atoms.push_back({p, Zone::OnMr});
    }

    const std::size_t n = atoms.size();
    DisjointSets ds(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (atoms[i].zone != atoms[j].zone) continue;
            for (Point p : {primitive_start(atoms[i].prim), primitive_end(atoms[i].prim)}) {
                if (!same_point(p, primitive_start(atoms[j].prim)) && !same_point(p, primitive_end(atoms[j].prim)))
                    continue;
                const Zone z = atoms[i].zone;
                if (z == Zone::OnMr || zone_of(p) == z) ds.unite(i, j);
            }
        }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[ds.find(i)].push_back(i);

    const auto all_prims = primitives(net);
    const auto grid = default_rho_grid(M);
    ComponentGraph g;
    std::vector<Primitive> connectors;
    for (const auto& [root, members] : groups) {
        std::vector<Primitive> pieces;
        for (std::size_t i : members) pieces.push_back(atoms[i].prim);
        const Zone z = atoms[root].zone;
        if (z == Zone::Inside) {
            connectors.insert(connectors.end(), pieces.begin(), pieces.end());
            continue;
        }
        if (z == Zone::OnMr) {
            bool energetic = false;
            for (const auto& p : pieces) {
                for (double u : {0.25, 0.5, 0.75})
                    if (energetic_on_grid(all_prims, M, r, primitive_at(p, u), grid, nullptr)) {
                        energetic = true;
                        break;
                    }
                if (energetic) break;
            }
            if (!energetic) {
                connectors.insert(connectors.end(), pieces.begin(), pieces.end());
                continue;
            }
            GraphNode node;
            node.kind = GraphNode::Kind::Arc;
            node.pieces = std::move(pieces);
            node.q = covered_arc(node.pieces, M, r, &node.q_is_single_arc);
            g.nodes.push_back(std::move(node));
            continue;
        }
        GraphNode node;
        node.kind = GraphNode::Kind::Component;
        node.pieces = std::move(pieces);
        for (Point p : distinct_endpoints(node.pieces)) {
            if (zone_of(p) == Zone::OnMr) {
                node.entering_points.push_back(p);
            } else if (energetic_on_grid(all_prims, M, r, p, grid, nullptr)) {
                node.energetic_points.push_back(p);
            }
        }
        node.m_entering = static_cast<int>(node.entering_points.size());
        node.n_energetic = static_cast<int>(node.energetic_points.size());
        node.q = covered_arc(node.pieces, M, r, &node.q_is_single_arc);
        g.nodes.push_back(std::move(node));
    }
    g.chords = connectors;

    // Touching nodes.
    for (std::size_t a = 0; a < g.nodes.size(); ++a)
        for (std::size_t b = a + 1; b < g.nodes.size(); ++b) {
            if (g.nodes[a].kind == GraphNode::Kind::Arc && g.nodes[b].kind == GraphNode::Kind::Arc) continue;
            for (Point p : distinct_endpoints(g.nodes[a].pieces))
                if (touches(g.nodes[b].pieces, p)) g.edges.push_back({a, b, p, p, {}});
        }

    // Connector chains, joined away from node points.
    auto on_some_node = [&](Point p) {
        for (const auto& nd : g.nodes)
            if (touches(nd.pieces, p)) return true;
        return false;
    };
    const std::size_t nc = connectors.size();
    DisjointSets cs(nc);
    for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = i + 1; j < nc; ++j)
            for (Point p : {primitive_start(connectors[i]), primitive_end(connectors[i])})
                if ((same_point(p, primitive_start(connectors[j])) || same_point(p, primitive_end(connectors[j]))) &&
                    !on_some_node(p))
                    cs.unite(i, j);
    std::map<std::size_t, std::vector<Primitive>> chains;
    for (std::size_t i = 0; i < nc; ++i) chains[cs.find(i)].push_back(connectors[i]);
    for (const auto& [root, chain] : chains) {
        std::vector<std::pair<std::size_t, Point>> hits;
        for (Point p : distinct_endpoints(chain))
            for (std::size_t k = 0; k < g.nodes.size(); ++k)
                if (touches(g.nodes[k].pieces, p)) hits.emplace_back(k, p);
        for (std::size_t i = 0; i < hits.size(); ++i)
            for (std::size_t j = i + 1; j < hits.size(); ++j) {
                const auto [a, pa] = hits[i];
                const auto [b, pb] = hits[j];
                if (g.nodes[a].kind == GraphNode::Kind::Arc && g.nodes[b].kind == GraphNode::Kind::Arc) continue;
                if (same_point(pa, pb)) continue;
                g.edges.push_back({a, b, pa, pb, path_between(chain, pa, pb)});
            }
    }
    return g;
}

// ---- turning decomposition ---------------------------------------------------

bool TurningDecomposition::inequalities_hold(double tol) const {
    for (const auto& n : nodes)
        if (n.margin < -tol) return false;
    return true;
}

double TurningDecomposition::min_margin() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& n : nodes) m = std::min(m, n.margin);
    return m;
}

namespace {

double signed_area(const std::vector<Primitive>& pieces) {
    double a = 0.0;
    Point prev{};
    bool first = true;
    Point start{};
    for (const auto& p : pieces) {
        const int k = std::holds_alternative<Segment>(p) ? 1 : 32;
        for (int i = 0; i <= k; ++i) {
            const Point x = primitive_at(p, static_cast<double>(i) / k);
            if (first) {
                start = x;
                first = false;
            } else {
                a += cross(prev, x);
            }
            prev = x;
        }
    }
    a += cross(prev, start);
    return 0.5 * a;
}

Point closest_on_node(const GraphNode& node, Point x) {
    Point best{};
    double bd = std::numeric_limits<double>::infinity();
    for (const auto& p : node.pieces) {
        const Point c = closest_on(p, x);
        if (dist(c, x) < bd) {
            bd = dist(c, x);
            best = c;
        }
    }
    return best;
}

struct Block {
    std::vector<Primitive> pieces;
    enum class Role { Node, TipLeft, TipRight, Chord } role = Role::Node;
    std::size_t node = 0;
};

}  // namespace

TurningDecomposition turning_decomposition(const ComponentGraph& g, const ConvexCurve& M, double r) {
    (void)r;
    const auto order = g.path_order();
    if (order.empty()) throw NotAPath("component graph is not a path");
    const std::size_t e0 = order.front(), e1 = order.back();
    if (g.nodes[e0].kind != GraphNode::Kind::Component || g.nodes[e1].kind != GraphNode::Kind::Component)
        throw NotAPath("an ending node of the component graph is an arc of M_r");

    auto edge_between = [&](std::size_t a, std::size_t b) -> GraphEdge {
        for (const auto& e : g.edges) {
            if (e.a == a && e.b == b) return e;
            if (e.a == b && e.b == a) {
                GraphEdge f{a, b, e.at_b, e.at_a, {}};
                for (auto it = e.chord.rbegin(); it != e.chord.rend(); ++it) f.chord.push_back(reversed(*it));
                return f;
            }
        }
        throw NotAPath("missing edge on the path");
    };

    bool any_overlap = false;
    std::optional<TurningDecomposition> fallback;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const std::size_t left = attempt == 0 ? e0 : e1;
        const std::size_t right = attempt == 0 ? e1 : e0;
        const CurveArc ql = g.nodes[left].q, qr = g.nodes[right].q;
        const double d = M.wrap(qr.s_start - ql.s_start);
        const double tol = 1e-7 * M.arc_length();
        double ov;
        if (d <= ql.length + tol) ov = std::max(0.0, std::min(ql.length - d, qr.length));
        else if (d >= M.arc_length() - tol) ov = std::min(ql.length, qr.length);
        else continue;
        any_overlap = true;
        const double sA = qr.s_start + 0.5 * ov;
        const Point A = M.point(sA);
        const Vec2 a_dir = M.at(sA).tangent;

        std::vector<std::size_t> walk(order.begin(), order.end());
        if (walk.front() != right) std::reverse(walk.begin(), walk.end());

        TurningDecomposition td;
        td.left = left;
        td.right = right;
        td.A = A;
        td.tip_left = closest_on_node(g.nodes[left], A);
        td.tip_right = closest_on_node(g.nodes[right], A);

        std::vector<GraphEdge> links;
        for (std::size_t i = 0; i + 1 < walk.size(); ++i) links.push_back(edge_between(walk[i], walk[i + 1]));

        std::vector<Block> blocks;
        try {
            blocks.push_back({path_between(g.nodes[left].pieces, links.back().at_b, td.tip_left), Block::Role::Node, left});
            blocks.push_back({{Segment{td.tip_left, A}}, Block::Role::TipLeft, 0});
            blocks.push_back({{Segment{A, td.tip_right}}, Block::Role::TipRight, 0});
            blocks.push_back({path_between(g.nodes[right].pieces, td.tip_right, links.front().at_a), Block::Role::Node, right});
            for (std::size_t i = 0; i < links.size(); ++i) {
                if (!links[i].chord.empty()) blocks.push_back({links[i].chord, Block::Role::Chord, 0});
                const std::size_t w = walk[i + 1];
                if (w == left) break;
                blocks.push_back({path_between(g.nodes[w].pieces, links[i].at_b, links[i + 1].at_a), Block::Role::Node, w});
            }
        } catch (const NotAPath&) {
            continue;
        }

        std::vector<Primitive> boundary;
        for (const auto& b : blocks) boundary.insert(boundary.end(), b.pieces.begin(), b.pieces.end());
        td.boundary = boundary;
        td.total = turning(boundary, true);

        auto first_tan = [](const Block& b) { return primitive_start_tangent(b.pieces.front()); };
        auto last_tan = [](const Block& b) { return primitive_end_tangent(b.pieces.back()); };
        std::vector<const Block*> live;
        for (const auto& b : blocks) {
            bool nonzero = false;
            for (const auto& p : b.pieces) nonzero = nonzero || primitive_length(p) > 1e-15;
            if (nonzero) live.push_back(&b);
        }
        const Vec2 to_A = unit(A - td.tip_left), from_A = unit(td.tip_right - A);
        const Block& lb = blocks[0];
        const Block& rb = blocks[3];
        td.angle_tip_left = lb.pieces.empty() ? 0.0 : directed_angle(last_tan(lb), to_A);
        td.angle_left_a = directed_angle(to_A, a_dir);
        td.angle_a_right = directed_angle(a_dir, from_A);
        td.angle_tip_right = rb.pieces.empty() ? 0.0 : directed_angle(from_A, first_tan(rb));
        td.junction_turn = 0.0;
        td.chord_turn = 0.0;
        for (std::size_t i = 0; i < live.size(); ++i) {
            const Block& b = *live[i];
            const Block& nb = *live[(i + 1) % live.size()];
            if (b.role == Block::Role::Chord) td.chord_turn += turning(b.pieces, false);
            const bool named = (&b == &lb && nb.role == Block::Role::TipLeft) || b.role == Block::Role::TipLeft ||
                               (b.role == Block::Role::TipRight && &nb == &rb);
            if (named) continue;
            if (b.role == Block::Role::TipRight || nb.role == Block::Role::TipLeft) {
                // A zero-length ending block: the tip corner is the junction.
                td.junction_turn += directed_angle(last_tan(b), first_tan(nb));
                continue;
            }
            td.junction_turn += directed_angle(last_tan(b), first_tan(nb));
        }

        double parts = td.angle_tip_left + td.angle_left_a + td.angle_a_right + td.angle_tip_right + td.junction_turn +
                       td.chord_turn;
        auto node_entry = [&](const Block& b) {
            NodeTurn nt;
            nt.node = b.node;
            nt.kind = g.nodes[b.node].kind;
            nt.turn_S = turning(b.pieces, false);
            nt.turn_q = M.turning(g.nodes[b.node].q);
            nt.rhs = nt.turn_S;
            if (b.node == left && &b == &lb) nt.rhs += td.angle_tip_left + td.angle_left_a;
            if (b.node == right && &b == &rb) nt.rhs += td.angle_a_right + td.angle_tip_right;
            nt.margin = nt.rhs - nt.turn_q;
            return nt;
        };
        td.nodes.push_back(node_entry(lb));
        for (std::size_t i = blocks.size(); i-- > 4;)
            if (blocks[i].role == Block::Role::Node) td.nodes.push_back(node_entry(blocks[i]));
        td.nodes.push_back(node_entry(rb));
        for (const auto& nt : td.nodes) parts += nt.turn_S;
        td.total_from_parts = parts;

        if (signed_area(boundary) < 0.0) return td;
        if (!fallback) fallback = td;
    }
    if (!any_overlap) throw NoCommonCoveredPoint("covered arcs of the two ending components do not meet");
    if (fallback) return *fallback;
    throw NotAPath("could not trace the boundary of T");
}

TurningDecomposition turning_decomposition(const EmbeddedNetwork& net, const ConvexCurve& M, double r) {
    return turning_decomposition(component_graph(net, M, r), M, r);
}

}  // namespace mdm

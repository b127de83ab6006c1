#include "mdm/horseshoe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdm/steiner.hpp"

namespace mdm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;

// Golden-section minimum of f on [a, b].
template <class F>
std::pair<double, double> golden_min(F&& f, double a, double b, double tol) {
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

// Distance along the tangent from its base to the point where it first comes
// within r of A; throws when the line stays farther than r.
double tip_length(Point base, Vec2 dir, Point A, double r) {
    const double t0 = dot(A - base, dir);
    const double h = std::abs(cross(dir, A - base));
    if (h > r) throw InfeasibleGap("tangent line passes farther than r from A");
    return t0 - std::sqrt(r * r - h * h);
}

}  // namespace

double Horseshoe::length() const {
    return arc.length + tangent_left.length() + tangent_right.length();
}

EmbeddedNetwork Horseshoe::network(std::shared_ptr<const ConvexCurve> inner) const {
    EmbeddedNetwork net;
    const auto right_end = net.add_vertex(tangent_right.b);
    const auto left_end = net.add_vertex(tangent_left.a);
    const auto tl = net.add_vertex(tip_left);
    const auto tr = net.add_vertex(tip_right);
    net.mr_arcs.push_back({arc, right_end, left_end});
    net.add_edge(left_end, tl);
    net.add_edge(tr, right_end);
    net.arc_curve = std::move(inner);
    return net;
}

EmbeddedNetwork horseshoe_network(const ConvexCurve& M, const Horseshoe& h) {
    return h.network(std::make_shared<const ConvexCurve>(M.offset_inward(h.r)));
}

bool within_theorem_regime(const ConvexCurve& M, double r) {
    const double R = M.min_curvature_radius();
    return r < (M.kind() == CurveKind::Circle ? R / 4.98 : R / 5.0);
}

Horseshoe build_horseshoe(const ConvexCurve& M, double r, const HorseshoeGap& gap) {
    if (!(r > 0.0) || !(r < M.min_curvature_radius()))
        throw std::invalid_argument("build_horseshoe: need 0 < r < min curvature radius");
    if (!(gap.left > 0.0) || !(gap.right > 0.0) || !(gap.total() < M.arc_length()))
        throw InfeasibleGap("gap sides must be positive and leave part of M to the arc");
    const ConvexCurve Mr = M.offset_inward(r);
    Horseshoe h;
    h.r = r;
    h.gap = gap;
    h.gap.center = M.wrap(gap.center);
    h.within_theorem_regime = within_theorem_regime(M, r);
    h.A = M.point(h.gap.center);

    auto inner_point = [&](double s) {
        const CurvePoint c = M.at(s);
        const Point p = c.point - r * c.outward_normal;
        return Mr.project(p);
    };
    const double mL = inner_point(h.gap.center - gap.left);
    const double mR = inner_point(h.gap.center + gap.right);
    h.arc = CurveArc{mR, Mr.wrap(mL - mR)};
    const CurvePoint L = Mr.at(mL), Rt = Mr.at(mR);

    const double len_l = tip_length(L.point, L.tangent, h.A, r);
    const double len_r = tip_length(Rt.point, -Rt.tangent, h.A, r);
    if (!(len_l > 0.0) || !(len_r > 0.0)) throw InfeasibleGap("tangent segment would be degenerate");
    h.tip_left = L.point + len_l * L.tangent;
    h.tip_right = Rt.point - len_r * Rt.tangent;
    h.tangent_left = Segment{L.point, h.tip_left};
    h.tangent_right = Segment{h.tip_right, Rt.point};

    std::vector<Primitive> prims = Mr.arc_primitives(h.arc);
    prims.push_back(h.tangent_left);
    prims.push_back(h.tangent_right);
    if (!covers_exactly(prims, M, r)) throw InfeasibleGap("horseshoe does not cover M");
    return h;
}

namespace {

// Horseshoe described by its arc ends on M_r: the arc runs clockwise from
// `right` to `left` and two tangent tips share the rest of M at the best
// split among m sample points.
struct EndsFit {
    double length = kInf;
    HorseshoeGap gap;
};

EndsFit fit_ends(const ConvexCurve& M, const ConvexCurve& Mr, double r, double left, double right, int m) {
    EndsFit out;
    const double arc = Mr.wrap(left - right);
    if (!(arc > 0.0)) return out;
    const CurvePoint XL = Mr.at(left), XR = Mr.at(right);
    const double sL = M.project(normal_foot(M, XL, r).point);
    const double sR = M.project(normal_foot(M, XR, r).point);
    const double glen = M.wrap(sR - sL);
    auto need = [&](Point base, Vec2 d, Point y) {
        const Vec2 w = y - base;
        const double t = dot(w, d), h = std::abs(cross(d, w));
        if (h > r * (1.0 + 1e-9)) return kInf;
        const double l = t - std::sqrt(std::max(0.0, r * r - h * h));
        if (l <= 0.0) return t >= 0.0 || norm(w) <= r * (1.0 + 1e-9) ? 0.0 : kInf;
        return l;
    };
    std::vector<double> pre(m + 1), suf(m + 1);
    for (int i = 0; i <= m; ++i) {
        const Point y = M.point(sL + glen * i / m);
        pre[i] = std::max(i ? pre[i - 1] : 0.0, need(XL.point, XL.tangent, y));
        suf[i] = need(XR.point, -XR.tangent, y);
    }
    for (int i = m - 1; i >= 0; --i) suf[i] = std::max(suf[i], suf[i + 1]);
    int split = -1;
    double best = kInf;
    for (int i = 0; i <= m; ++i)
        if (pre[i] + suf[i] < best) {
            best = pre[i] + suf[i];
            split = i;
        }
    if (split < 0) return out;
    const double sA = sL + glen * split / m;
    out.length = arc + best;
    out.gap = {M.wrap(sA), sA - sL, sL + glen - sA};
    return out;
}

}  // namespace

HorseshoeSearch search_horseshoes(const ConvexCurve& M, double r) {
    const double L = M.arc_length();
    auto eval = [&](double c, double gl, double gr) {
        try {
            return build_horseshoe(M, r, {c, gl, gr}).length();
        } catch (const InfeasibleGap&) {
            return kInf;
        }
    };
    auto eval_gap = [&](const HorseshoeGap& g) { return eval(g.center, g.left, g.right); };

    // Starting gaps: local minima of a symmetric gap scan at each centre.
    const bool circle = M.kind() == CurveKind::Circle;
    std::vector<std::pair<double, HorseshoeGap>> starts;
    {
        std::vector<double> centers;
        const int nc = circle ? 1 : 96;
        for (int i = 0; i < nc; ++i) centers.push_back(L * i / nc);
        const int ng = 240;
        const double gmax = 0.5 * L;
        for (double c : centers) {
            std::vector<double> f(ng + 1, kInf);
            for (int i = 1; i < ng; ++i) f[i] = eval(c, gmax * i / ng, gmax * i / ng);
            for (int i = 1; i < ng; ++i) {
                if (!std::isfinite(f[i]) || f[i] > f[i - 1] || f[i] > f[i + 1]) continue;
                auto sym = [&](double g) { return eval(c, g, g); };
                const auto [g, len] = golden_min(sym, gmax * (i - 1) / ng, gmax * (i + 1) / ng, 1e-10 * L);
                if (std::isfinite(len)) starts.push_back({len, {c, g, g}});
            }
        }
    }
    // Off a circle, feasible symmetric gaps can be narrow windows that the
    // scan misses; a grid over the two arc ends finds them.
    if (!circle) {
        const ConvexCurve Mr = M.offset_inward(r);
        const double Lr = Mr.arc_length();
        // Nodes uniform in arc length and in turning angle, plus a few close to
        // each corner end where tips along flat sides are nearly parallel.
        std::vector<double> nodes;
        const int per = 128, m = 48;
        for (int i = 0; i < per; ++i) nodes.push_back(Lr * i / per);
        for (const auto& pc : Mr.pieces()) {
            if (!pc.is_corner || pc.length <= 0.0) continue;
            const double turn = pc.length / (M.min_curvature_radius() - r);
            const int k = std::max(1, static_cast<int>(std::ceil(per * turn / kTwoPi)));
            for (int i = 0; i < k; ++i) nodes.push_back(pc.s0 + pc.length * i / k);
            for (double angle : {1e-3, 4e-3, 1.6e-2}) {
                if (angle >= turn) continue;
                const double ds = pc.length * angle / turn;
                nodes.push_back(pc.s0 + ds);
                nodes.push_back(pc.s0 + pc.length - ds);
            }
        }
        for (auto& x : nodes) x = Mr.wrap(x);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end(), [&](double a, double b) { return b - a < 1e-9 * Lr; }),
                    nodes.end());
        const int n = static_cast<int>(nodes.size());
        std::vector<double> f(n * n, kInf);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) f[i * n + j] = fit_ends(M, Mr, r, nodes[i], nodes[j], m).length;
        std::vector<std::pair<double, std::pair<int, int>>> minima;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double v = f[i * n + j];
                if (!std::isfinite(v)) continue;
                bool is_min = true;
                for (int di = -1; di <= 1 && is_min; ++di)
                    for (int dj = -1; dj <= 1; ++dj)
                        if ((di || dj) && f[((i + di + n) % n) * n + (j + dj + n) % n] < v) is_min = false;
                if (is_min) minima.push_back({v, {i, j}});
            }
        std::sort(minima.begin(), minima.end());
        if (minima.size() > 8) minima.resize(8);
        auto spacing = [&](int i) {
            return std::max(Mr.wrap(nodes[(i + 1) % n] - nodes[i]), Mr.wrap(nodes[i] - nodes[(i + n - 1) % n]));
        };
        for (const auto& [v, ij] : minima) {
            double u = nodes[ij.first], w = nodes[ij.second];
            double best = v, step = std::max(spacing(ij.first), spacing(ij.second));
            for (int round = 0; round < 40 && step > 1e-10 * Lr; ++round) {
                bool moved = false;
                for (int coord = 0; coord < 2; ++coord) {
                    auto g = [&](double x) {
                        return coord == 0 ? fit_ends(M, Mr, r, x, w, 256).length : fit_ends(M, Mr, r, u, x, 256).length;
                    };
                    const double x0 = coord == 0 ? u : w;
                    const auto [x, len] = golden_min(g, x0 - step, x0 + step, 1e-11 * Lr);
                    if (len < best - 1e-13 * L) {
                        best = len;
                        (coord == 0 ? u : w) = x;
                        moved = true;
                    }
                }
                if (!moved) step *= 0.5;
            }
            const auto fit = fit_ends(M, Mr, r, u, w, 1024);
            const double len = eval_gap(fit.gap);
            if (std::isfinite(len)) starts.push_back({len, fit.gap});
        }
    }
    if (starts.empty()) throw InfeasibleGap("no feasible horseshoe on the search grid");
    std::stable_sort(starts.begin(), starts.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    HorseshoeSearch out;
    double best_len = kInf;
    HorseshoeGap best_gap;
    auto remember = [&](const HorseshoeGap& gap, double len) {
        const auto h = build_horseshoe(M, r, gap);
        const bool seen = std::any_of(out.local_minima.begin(), out.local_minima.end(), [&](const Horseshoe& o) {
            return std::abs(o.length() - len) < 1e-9 * L && std::abs(M.wrap(o.gap.center - gap.center)) < 1e-6 * L;
        });
        if (!seen) out.local_minima.push_back(h);
        if (len < best_len) {
            best_len = len;
            best_gap = gap;
        }
    };
    if (circle) {
        for (const auto& [len, gap] : starts) remember(gap, len);
    } else {
        // Coordinate polish over centre and the two sides from the best starts.
        const std::size_t polish = std::min<std::size_t>(starts.size(), 12);
        for (std::size_t k = 0; k < starts.size(); ++k) {
            auto [len0, gap] = starts[k];
            double len = len0;
            if (k < polish) {
                double step = 0.05 * L;
                for (int round = 0; round < 60 && step > 1e-11 * L; ++round) {
                    bool moved = false;
                    for (int coord = 0; coord < 3; ++coord) {
                        auto field = [&](HorseshoeGap& g) -> double& {
                            return coord == 0 ? g.center : coord == 1 ? g.left : g.right;
                        };
                        auto f = [&](double x) {
                            HorseshoeGap g = gap;
                            field(g) = x;
                            return eval_gap(g);
                        };
                        const double x0 = field(gap);
                        const auto [x, fx] = golden_min(f, x0 - step, x0 + step, 1e-12 * L);
                        if (fx < len - 1e-13 * L) {
                            len = fx;
                            field(gap) = x;
                            moved = true;
                        }
                    }
                    if (!moved) step *= 0.5;
                }
            }
            remember(gap, len);
        }
    }
    out.best = build_horseshoe(M, r, best_gap);
    return out;
}

Horseshoe optimal_horseshoe(const ConvexCurve& M, double r) { return search_horseshoes(M, r).best; }

// ---- structure -------------------------------------------------------------

namespace {

struct ChainPiece {
    bool is_arc = false;
    std::size_t index = 0;
    std::size_t from = 0;  // vertex class at the start of the walk direction
    std::size_t to = 0;
};

}  // namespace

StructureReport verify_horseshoe_structure(const EmbeddedNetwork& net, const ConvexCurve& M, double r, double tol) {
    StructureReport rep;
    auto fail = [&](std::string why) { rep.failures.push_back(std::move(why)); };
    const ConvexCurve Mr = M.offset_inward(r);
    const double angle_tol = std::sqrt(tol);

    if (net.empty()) {
        fail("empty network");
        return rep;
    }
    const auto prims = primitives(net);
    rep.coverage_excess = std::max(0.0, max_sampled_distance(prims, M, default_samples(), nullptr) - r);
    if (!covers_exactly(prims, M, r, tol)) fail("does not cover M");
    const bool connected = is_connected(net);
    const bool loop = has_loop(net);
    if (!connected) fail("not connected");
    if (loop) fail("has a loop");
    const auto deg = degrees(net);
    const bool branched = std::any_of(deg.begin(), deg.end(), [](int d) { return d >= 3; });
    if (branched) fail("contains Steiner branch points");
    if (!connected || loop || branched) {
        if (net.edges.empty()) fail("no tangent segments");
        return rep;
    }

    // Walk the path from one end.
    const auto cls = vertex_classes(net);
    std::vector<ChainPiece> pieces;
    for (std::size_t i = 0; i < net.edges.size(); ++i)
        if (cls[net.edges[i].a] != cls[net.edges[i].b]) pieces.push_back({false, i, cls[net.edges[i].a], cls[net.edges[i].b]});
    for (std::size_t i = 0; i < net.mr_arcs.size(); ++i) pieces.push_back({true, i, cls[net.mr_arcs[i].v0], cls[net.mr_arcs[i].v1]});
    if (pieces.empty()) {
        fail("no M_r arc");
        fail("no tangent segments");
        return rep;
    }
    std::size_t start = cls[0];
    for (std::size_t v = 0; v < deg.size(); ++v)
        if (deg[v] == 1) {
            start = cls[v];
            break;
        }
    std::vector<ChainPiece> chain;
    std::vector<bool> used(pieces.size(), false);
    std::size_t cur = start;
    while (chain.size() < pieces.size()) {
        bool moved = false;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (used[i] || (pieces[i].from != cur && pieces[i].to != cur)) continue;
            used[i] = true;
            ChainPiece p = pieces[i];
            if (p.from != cur) std::swap(p.from, p.to);
            chain.push_back(p);
            cur = p.to;
            moved = true;
            break;
        }
        if (!moved) break;
    }

    // Oriented primitives along the walk.
    struct Oriented {
        std::vector<Primitive> prims;
        bool on_mr = false;
    };
    auto on_mr = [&](Point p) { return std::abs(Mr.signed_distance(p)) <= tol; };
    std::vector<Oriented> walk;
    for (const auto& c : chain) {
        Oriented o;
        if (c.is_arc) {
            const auto& m = net.mr_arcs[c.index];
            o.prims = net.arc_curve->arc_primitives(m.arc);
            if (cls[m.v0] != c.from) {
                std::reverse(o.prims.begin(), o.prims.end());
                for (auto& p : o.prims) p = reversed(p);
            }
        } else {
            const auto& e = net.edges[c.index];
            Point a = net.vertices[e.a], b = net.vertices[e.b];
            if (cls[e.a] != c.from) std::swap(a, b);
            o.prims = {Segment{a, b}};
        }
        o.on_mr = true;
        for (const auto& p : o.prims)
            for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) o.on_mr = o.on_mr && on_mr(primitive_at(p, u));
        walk.push_back(std::move(o));
    }

    // Runs of M_r pieces and maximal straight runs off M_r.
    int runs = 0;
    for (std::size_t i = 0; i < walk.size(); ++i)
        if (walk[i].on_mr && (i == 0 || !walk[i - 1].on_mr)) ++runs;
    rep.arcs = runs;
    if (runs == 0) fail("no M_r arc");
    if (runs > 1) fail("more than one M_r arc");

    std::size_t first_on = walk.size(), last_on = 0;
    for (std::size_t i = 0; i < walk.size(); ++i)
        if (walk[i].on_mr) {
            first_on = std::min(first_on, i);
            last_on = i;
        }
    auto straight_run = [&](std::size_t lo, std::size_t hi) {
        // Pieces [lo, hi) must be collinear segments.
        for (std::size_t i = lo; i < hi; ++i) {
            const auto* s = std::get_if<Segment>(&walk[i].prims.front());
            if (!s || walk[i].prims.size() != 1) return false;
            if (i > lo) {
                const auto* prev = std::get_if<Segment>(&walk[i - 1].prims.front());
                if (std::abs(directed_angle(prev->direction(), s->direction())) > angle_tol) return false;
            }
        }
        return true;
    };
    if (runs == 1) {
        int tangents = 0;
        const bool left_ok = first_on > 0 && straight_run(0, first_on);
        const bool right_ok = last_on + 1 < walk.size() && straight_run(last_on + 1, walk.size());
        tangents = (left_ok ? 1 : 0) + (right_ok ? 1 : 0);
        rep.tangent_segments = tangents;
        if (first_on == 0 || last_on + 1 == walk.size()) fail("no tangent segments at an end of the arc");
        else if (tangents != 2) fail("ends are not single straight segments");
        if (tangents == 2) {
            // Tangency at both junctions.
            const Vec2 in_dir = primitive_end_tangent(walk[first_on - 1].prims.back());
            const Vec2 arc_start = primitive_start_tangent(walk[first_on].prims.front());
            const Vec2 arc_end = primitive_end_tangent(walk[last_on].prims.back());
            const Vec2 out_dir = primitive_start_tangent(walk[last_on + 1].prims.front());
            if (std::abs(directed_angle(in_dir, arc_start)) > angle_tol ||
                std::abs(directed_angle(arc_end, out_dir)) > angle_tol)
                fail("segments are not tangent to M_r at the arc ends");
            for (std::size_t i : {std::size_t{0}, walk.size() - 1}) {
                const auto& s = std::get<Segment>(walk[i].prims.front());
                if (Mr.signed_distance(s.at(0.5)) < -tol) fail("a segment enters the interior of N_r");
            }
        }
    }
    // Energetic tips.
    const Point tip0 = primitive_start(walk.front().prims.front());
    const Point tip1 = primitive_end(walk.back().prims.back());
    for (Point tip : {tip0, tip1})
        if (!classify_point(net, M, r, tip).energetic()) {
            fail("a free tip is not energetic");
            break;
        }
    rep.passed = rep.failures.empty();
    return rep;
}

// ---- stadium competitor --------------------------------------------------

EmbeddedNetwork stadium_competitor(double t, double r) {
    if (!(r > 0.0) || !(r < 1.0)) throw std::invalid_argument("stadium_competitor: need 0 < r < 1");
    const double q = t / r;
    const double k2 = std::round(q);
    if (std::abs(q - k2) > 1e-9 * std::max(1.0, q) || k2 < 2.0 || static_cast<long>(k2) % 2 != 0)
        throw GridMismatch("stadium_competitor: t / r must be an even positive integer");
    const long K = static_cast<long>(k2) / 2;
    EmbeddedNetwork net;
    std::vector<std::size_t> top, bottom;
    for (long k = 0; k <= K; ++k) top.push_back(net.add_vertex({2.0 * k * r, 1.0}));
    for (long k = 0; k < K; ++k) bottom.push_back(net.add_vertex({(2.0 * k + 1.0) * r, -1.0}));
    for (long k = 0; k < K; ++k) {
        const Point a = net.vertices[top[k]], b = net.vertices[bottom[k]], c = net.vertices[top[k + 1]];
        const auto fp = fermat_point(a, b, c);
        const std::array<std::size_t, 3> ids{top[k], bottom[k], top[k + 1]};
        if (fp.steiner_point) {
            const auto s = net.add_vertex(*fp.steiner_point);
            for (auto id : ids) net.add_edge(s, id);
        } else {
            for (const auto& e : fp.tree.edges) net.add_edge(ids[e.a], ids[e.b]);
        }
    }
    const auto left_mid = net.add_vertex({-1.0, 0.0});
    const auto left_low = net.add_vertex({0.0, -1.0});
    const auto right_mid = net.add_vertex({t + 1.0, 0.0});
    const auto right_low = net.add_vertex({t, -1.0});
    net.add_edge(top.front(), left_mid);
    net.add_edge(left_mid, left_low);
    net.add_edge(top.back(), right_mid);
    net.add_edge(right_mid, right_low);
    return net;
}

}  // namespace mdm

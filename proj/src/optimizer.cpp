#include "mdm/optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>

#include "mdm/steiner.hpp"

namespace mdm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr long kCertifyAfter = 400;
constexpr std::size_t kMaxVertices = 400;

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

struct Ctx {
    const ConvexCurve& M;
    double r;
    std::shared_ptr<const ConvexCurve> Mr;
    double R;   // length scale
    double Lr;  // length of M_r

    bool feasible(const EmbeddedNetwork& n) const {
        if (n.empty()) return false;
        const auto p = primitives(n);
        return covers_exactly(p, M, r, 1e-9);
    }
    double excess(const EmbeddedNetwork& n) const {
        if (n.empty()) return kInf;
        const auto p = primitives(n);
        return std::max(0.0, max_sampled_distance(p, M, 2048) - r);
    }
    double signed_wrap(double d) const {
        d = std::fmod(d, Lr);
        if (d > 0.5 * Lr) d -= Lr;
        if (d <= -0.5 * Lr) d += Lr;
        return d;
    }
};

Ctx make_ctx(const ConvexCurve& M, double r, std::shared_ptr<const ConvexCurve> Mr) {
    if (!Mr) Mr = std::make_shared<const ConvexCurve>(M.offset_inward(r));
    const double Lr = Mr->arc_length();
    return Ctx{M, r, std::move(Mr), M.min_curvature_radius(), Lr};
}

struct Incidence {
    std::vector<std::vector<std::size_t>> edges, arcs;

    explicit Incidence(const EmbeddedNetwork& n) : edges(n.vertices.size()), arcs(n.vertices.size()) {
        for (std::size_t i = 0; i < n.edges.size(); ++i) {
            edges[n.edges[i].a].push_back(i);
            if (n.edges[i].b != n.edges[i].a) edges[n.edges[i].b].push_back(i);
        }
        for (std::size_t i = 0; i < n.mr_arcs.size(); ++i) {
            arcs[n.mr_arcs[i].v0].push_back(i);
            arcs[n.mr_arcs[i].v1].push_back(i);
        }
    }
    std::size_t degree(std::size_t v) const { return edges[v].size() + arcs[v].size(); }
};

std::size_t other(const Edge& e, std::size_t v) { return e.a == v ? e.b : e.a; }

double arc_end_param(const MrArc& a, std::size_t v) { return a.v0 == v ? a.arc.s_start : a.arc.s_end(); }

bool set_arc_end(const Ctx& ctx, MrArc& a, std::size_t v, double s) {
    if (a.v0 == v && a.v1 == v) {
        a.arc.s_start = ctx.Mr->wrap(s);
        return true;
    }
    if (a.v0 == v) {
        const double d = ctx.signed_wrap(s - a.arc.s_start);
        a.arc.s_start = ctx.Mr->wrap(s);
        a.arc.length -= d;
    } else if (a.v1 == v) {
        a.arc.length += ctx.signed_wrap(s - a.arc.s_end());
    }
    return a.arc.length > 0.0 && a.arc.length < ctx.Lr;
}

// Moves an attached vertex to parameter s, dragging every incident arc end.
bool move_attached(const Ctx& ctx, EmbeddedNetwork& n, const Incidence& inc, std::size_t v, double s) {
    std::set<std::size_t> seen(inc.arcs[v].begin(), inc.arcs[v].end());
    for (auto ai : seen)
        if (!set_arc_end(ctx, n.mr_arcs[ai], v, s)) return false;
    n.vertices[v] = ctx.Mr->point(s);
    return true;
}

void redirect(EmbeddedNetwork& n, std::size_t from, std::size_t to) {
    for (auto& e : n.edges) {
        if (e.a == from) e.a = to;
        if (e.b == from) e.b = to;
    }
    for (auto& a : n.mr_arcs) {
        if (a.v0 == from) a.v0 = to;
        if (a.v1 == from) a.v1 = to;
    }
}

template <class T>
void erase_at(std::vector<T>& v, std::size_t i) {
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
}

void compact(EmbeddedNetwork& n, std::vector<bool>& mask) {
    const Incidence inc(n);
    std::vector<std::size_t> map(n.vertices.size(), kNone);
    std::vector<Point> verts;
    std::vector<bool> m;
    for (std::size_t v = 0; v < n.vertices.size(); ++v) {
        if (inc.degree(v) == 0) continue;
        map[v] = verts.size();
        verts.push_back(n.vertices[v]);
        m.push_back(mask[v]);
    }
    if (verts.empty() && !n.vertices.empty()) {
        map[0] = 0;
        verts.push_back(n.vertices[0]);
        m.push_back(mask[0]);
    }
    for (auto& e : n.edges) {
        e.a = map[e.a];
        e.b = map[e.b];
    }
    for (auto& a : n.mr_arcs) {
        a.v0 = map[a.v0];
        a.v1 = map[a.v1];
    }
    n.vertices = std::move(verts);
    mask = std::move(m);
}

// Removes tiny pieces, merges arcs meeting at a bare vertex, straightens
// collinear edge pairs and drops unused vertices.
void normalize(const Ctx& ctx, EmbeddedNetwork& n, std::vector<bool>& mask) {
    mask.resize(n.vertices.size(), true);
    const double tiny = 1e-10 * ctx.R;
    for (int guard = 0; guard < 10000; ++guard) {
        bool changed = false;
        std::erase_if(n.edges, [](const Edge& e) { return e.a == e.b; });
        for (std::size_t i = 0; i < n.edges.size() && !changed; ++i)
            for (std::size_t j = i + 1; j < n.edges.size() && !changed; ++j) {
                const auto& a = n.edges[i];
                const auto& b = n.edges[j];
                if ((a.a == b.a && a.b == b.b) || (a.a == b.b && a.b == b.a)) {
                    erase_at(n.edges, j);
                    changed = true;
                }
            }
        if (changed) continue;

        Incidence inc(n);
        for (std::size_t i = 0; i < n.edges.size(); ++i) {
            const Edge e = n.edges[i];
            if (dist(n.vertices[e.a], n.vertices[e.b]) >= tiny) continue;
            const bool aa = !inc.arcs[e.a].empty(), ba = !inc.arcs[e.b].empty();
            if (aa && ba) continue;
            const std::size_t keep = ba ? e.b : aa ? e.a : !mask[e.b] ? e.b : e.a;
            const std::size_t drop = keep == e.a ? e.b : e.a;
            erase_at(n.edges, i);
            redirect(n, drop, keep);
            changed = true;
            break;
        }
        if (changed) continue;

        for (std::size_t i = 0; i < n.mr_arcs.size(); ++i) {
            const MrArc a = n.mr_arcs[i];
            if (a.arc.length >= tiny) continue;
            erase_at(n.mr_arcs, i);
            if (a.v0 != a.v1) redirect(n, a.v1, a.v0);
            changed = true;
            break;
        }
        if (changed) continue;

        // Short chords between points of M_r become arcs.
        for (std::size_t i = 0; i < n.edges.size(); ++i) {
            const Edge e = n.edges[i];
            const Point P = n.vertices[e.a], Q = n.vertices[e.b];
            if (dist(P, Q) > 1e-2 * ctx.R || (inc.arcs[e.a].empty() && inc.arcs[e.b].empty())) continue;
            if (std::abs(ctx.Mr->signed_distance(P)) > 1e-9 * ctx.R ||
                std::abs(ctx.Mr->signed_distance(Q)) > 1e-9 * ctx.R)
                continue;
            const double sp = ctx.Mr->project(P), sq = ctx.Mr->project(Q);
            erase_at(n.edges, i);
            if (ctx.Mr->wrap(sq - sp) < 0.5 * ctx.Lr) {
                n.mr_arcs.push_back({ctx.Mr->arc_between(sp, sq), e.a, e.b});
            } else {
                n.mr_arcs.push_back({ctx.Mr->arc_between(sq, sp), e.b, e.a});
            }
            n.vertices[e.a] = ctx.Mr->point(sp);
            n.vertices[e.b] = ctx.Mr->point(sq);
            if (!n.arc_curve) n.arc_curve = ctx.Mr;
            changed = true;
            break;
        }
        if (changed) continue;

        for (std::size_t v = 0; v < n.vertices.size() && !changed; ++v) {
            if (!inc.edges[v].empty() || inc.arcs[v].size() != 2) continue;
            const std::size_t x = inc.arcs[v][0], y = inc.arcs[v][1];
            if (x == y) continue;
            std::size_t in = kNone, out = kNone;
            for (auto k : {x, y}) {
                if (n.mr_arcs[k].v1 == v) in = k;
                if (n.mr_arcs[k].v0 == v) out = k;
            }
            if (in == kNone || out == kNone || in == out) continue;
            auto& a = n.mr_arcs[in];
            a.arc.length += n.mr_arcs[out].arc.length;
            a.v1 = n.mr_arcs[out].v1;
            if (a.v0 == a.v1 && std::abs(a.arc.length - ctx.Lr) < 1e-9 * ctx.R) a.arc.length = ctx.Lr;
            a.arc.length = std::min(a.arc.length, ctx.Lr);
            erase_at(n.mr_arcs, out);
            changed = true;
        }
        if (changed) continue;

        for (std::size_t v = 0; v < n.vertices.size(); ++v) {
            if (!mask[v] || !inc.arcs[v].empty() || inc.edges[v].size() != 2) continue;
            const std::size_t i = inc.edges[v][0], j = inc.edges[v][1];
            const std::size_t p = other(n.edges[i], v), q = other(n.edges[j], v);
            if (p == q) continue;
            const Vec2 du = unit(n.vertices[p] - n.vertices[v]), dv = unit(n.vertices[q] - n.vertices[v]);
            if (std::abs(cross(du, dv)) >= 1e-12 || dot(du, dv) >= 0.0) continue;
            erase_at(n.edges, std::max(i, j));
            erase_at(n.edges, std::min(i, j));
            n.add_edge(p, q);
            changed = true;
            break;
        }
        if (!changed) break;
    }
    compact(n, mask);
}

// Parameter of the point X of M_r whose tangent line passes through P, with P
// ahead of X along the clockwise tangent (or behind it).
std::optional<double> tangent_param(const Ctx& ctx, Point P, bool ahead) {
    const ConvexCurve& Mr = *ctx.Mr;
    const double sd = Mr.signed_distance(P);
    if (std::abs(sd) <= 1e-9 * ctx.R) return Mr.project(P);
    if (sd < 0.0) return std::nullopt;
    const double sg = ahead ? 1.0 : -1.0;
    auto g = [&](double s) {
        const auto c = Mr.at(s);
        return cross(c.tangent, P - c.point);
    };
    auto forward = [&](double s) {
        const auto c = Mr.at(s);
        return sg * dot(c.tangent, P - c.point) > 0.0;
    };
    const int n = 512;
    const double h = ctx.Lr / n;
    double ga = g(0.0);
    for (int i = 0; i < n; ++i) {
        double a = i * h, b = (i + 1) * h;
        const double gb = g(b);
        if ((ga > 0.0) != (gb > 0.0) && forward(0.5 * (a + b))) {
            const bool pos_a = ga > 0.0;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (a + b);
                ((g(mid) > 0.0) == pos_a ? a : b) = mid;
            }
            return Mr.wrap(0.5 * (a + b));
        }
        ga = gb;
    }
    return std::nullopt;
}

bool segment_meets_interior(const Ctx& ctx, Point a, Point b) {
    auto f = [&](double t) { return ctx.Mr->signed_distance(a + t * (b - a)); };
    const auto [t, d] = golden_min(f, 0.0, 1.0, 1e-9);
    return std::min({d, f(0.0), f(1.0)}) < -1e-9 * ctx.R;
}

// Smallest x in [lo, hi] with build(x) feasible; hi is doubled at most twice.
template <class Build>
std::optional<double> min_feasible(const Ctx& ctx, Build&& build, double hi, double lo = 0.0) {
    if (!(hi > lo)) hi = lo + 0.5 * ctx.r;
    for (int grow = 0; !ctx.feasible(build(hi)); ++grow) {
        if (grow == 2) return std::nullopt;
        lo = hi;
        hi *= 2.0;
    }
    const double tol = 1e-12 * ctx.R;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (ctx.feasible(build(mid)) ? hi : lo) = mid;
    }
    return hi;
}

// Parts of M left uncovered once the tip edge of leaf t (hanging from u) is
// removed.
std::vector<CurveArc> gaps_without_tip(const Ctx& ctx, EmbeddedNetwork n, std::size_t edge, std::size_t t,
                                       std::size_t u) {
    erase_at(n.edges, edge);
    n.vertices[t] = n.vertices[u];
    const auto p = primitives(n);
    return uncovered_arcs(p, ctx.M, ctx.r, 1e-9);
}

// Shortest segment from U along unit d whose r-neighbourhood contains every
// gap; nullopt when no length works.
std::optional<double> tip_reach(const Ctx& ctx, const std::vector<CurveArc>& gaps, Point U, Vec2 d) {
    const double r = ctx.r;
    auto need = [&](double s) {
        const Vec2 w = ctx.M.point(s) - U;
        const double t = dot(w, d), h = std::abs(cross(d, w));
        if (h > r * (1.0 + 1e-9)) return kInf;
        const double l = t - std::sqrt(std::max(0.0, r * r - h * h));
        if (l <= 0.0) return t >= 0.0 || norm(w) <= r * (1.0 + 1e-9) ? 0.0 : kInf;
        return l;
    };
    double best = 0.0;
    for (const auto& g : gaps) {
        const int n = 32;
        int arg = 0;
        double top = -1.0;
        for (int i = 0; i <= n; ++i) {
            const double v = need(g.s_start + g.length * i / n);
            if (!std::isfinite(v)) return std::nullopt;
            if (v > top) {
                top = v;
                arg = i;
            }
        }
        const double a = g.s_start + g.length * std::max(arg - 1, 0) / n;
        const double b = g.s_start + g.length * std::min(arg + 1, n) / n;
        const auto [s, neg] = golden_min([&](double s) { return -need(s); }, a, b, 1e-12 * ctx.R);
        best = std::max({best, top, -neg});
    }
    return best * (1.0 + 1e-12) + 1e-12 * ctx.R;
}

struct Candidate {
    EmbeddedNetwork net;
    bool neutral = false;
};
using MaybeCandidate = std::optional<Candidate>;

// ---- moves -----------------------------------------------------------------

class Moves {
public:
    Moves(const Ctx& ctx, const EmbeddedNetwork& net, const std::vector<bool>& mask)
        : ctx_(ctx), net_(net), mask_(mask), inc_(net) {}

    const Incidence& inc() const { return inc_; }

    bool plain(std::size_t v) const { return mask_[v] && inc_.arcs[v].empty(); }
    bool leaf(std::size_t v) const { return plain(v) && inc_.edges[v].size() == 1; }
    bool attached(std::size_t v) const { return mask_[v] && !inc_.arcs[v].empty(); }
    // Arc end carrying exactly one edge.
    bool arc_junction(std::size_t v) const {
        if (!mask_[v] || inc_.arcs[v].size() != 1 || inc_.edges[v].size() != 1) return false;
        const auto& a = net_.mr_arcs[inc_.arcs[v][0]];
        return a.v0 != a.v1;
    }
    bool end_refit_ok(std::size_t v) const {
        return arc_junction(v) && leaf(other(net_.edges[inc_.edges[v][0]], v));
    }
    bool bare_arc_end(std::size_t v) const {
        if (!mask_[v] || inc_.arcs[v].size() != 1 || !inc_.edges[v].empty()) return false;
        const auto& a = net_.mr_arcs[inc_.arcs[v][0]];
        return a.v0 != a.v1;
    }
    bool two_edges(std::size_t v) const { return plain(v) && inc_.edges[v].size() == 2; }
    bool three_edges(std::size_t v) const { return plain(v) && inc_.edges[v].size() == 3; }

    MaybeCandidate shift(std::size_t v, Vec2 delta) const {
        Candidate c{net_};
        c.net.vertices[v] += delta;
        return c;
    }

    MaybeCandidate attached_shift(std::size_t v, double ds) const {
        Candidate c{net_};
        const double s = arc_end_param(net_.mr_arcs[inc_.arcs[v][0]], v) + ds;
        if (!move_attached(ctx_, c.net, inc_, v, s)) return std::nullopt;
        return c;
    }

    MaybeCandidate split(std::size_t e, double u) const {
        if (net_.vertices.size() >= kMaxVertices) return std::nullopt;
        Candidate c{net_, true};
        const Edge ed = net_.edges[e];
        const auto m = c.net.add_vertex(net_.vertices[ed.a] + u * (net_.vertices[ed.b] - net_.vertices[ed.a]));
        c.net.edges[e].b = m;
        c.net.add_edge(m, ed.b);
        return c;
    }

    MaybeCandidate shortcut(std::size_t v) const {
        const std::size_t i = inc_.edges[v][0], j = inc_.edges[v][1];
        const std::size_t a = other(net_.edges[i], v), b = other(net_.edges[j], v);
        Candidate c{net_};
        erase_at(c.net.edges, std::max(i, j));
        erase_at(c.net.edges, std::min(i, j));
        if (a != b) c.net.add_edge(a, b);
        return c;
    }

    // Taut path around M_r replacing a -> v -> b when the chord ab cuts Int N_r.
    MaybeCandidate wrap(std::size_t v) const {
        const std::size_t i = inc_.edges[v][0], j = inc_.edges[v][1];
        std::size_t a = other(net_.edges[i], v), b = other(net_.edges[j], v);
        if (a == b) return std::nullopt;
        Point Pa = net_.vertices[a], Pb = net_.vertices[b];
        const Point Pv = net_.vertices[v];
        if (!segment_meets_interior(ctx_, Pa, Pb)) return std::nullopt;
        if (cross(Pv - Pa, Pb - Pv) > 0.0) {
            std::swap(a, b);
            std::swap(Pa, Pb);
        }
        const auto sx = tangent_param(ctx_, Pa, false);
        const auto sy = tangent_param(ctx_, Pb, true);
        if (!sx || !sy) return std::nullopt;
        Candidate c{net_};
        erase_at(c.net.edges, std::max(i, j));
        erase_at(c.net.edges, std::min(i, j));
        // An end already on M_r is its own tangent point.
        auto join = [&](std::size_t end, double s, bool outgoing) {
            const Point X = ctx_.Mr->point(s);
            if (dist(X, c.net.vertices[end]) <= 1e-9 * ctx_.R) {
                c.net.vertices[end] = X;
                return end;
            }
            const auto x = c.net.add_vertex(X);
            outgoing ? c.net.add_edge(x, end) : c.net.add_edge(end, x);
            return x;
        };
        const auto x = join(a, *sx, false);
        const auto y = join(b, *sy, true);
        c.net.mr_arcs.push_back({ctx_.Mr->arc_between(*sx, *sy), x, y});
        c.net.arc_curve = ctx_.Mr;
        return c;
    }

    // Slides an arc end to the tangent point seen from its edge's far end.
    MaybeCandidate reattach(std::size_t x) const {
        const auto& a = net_.mr_arcs[inc_.arcs[x][0]];
        const Point T = net_.vertices[other(net_.edges[inc_.edges[x][0]], x)];
        const auto s = tangent_param(ctx_, T, a.v1 == x);
        if (!s) return std::nullopt;
        Candidate c{net_};
        if (!move_attached(ctx_, c.net, inc_, x, *s)) return std::nullopt;
        return c;
    }

    // Arc end position by golden search; the free tip runs along the tangent
    // with the shortest feasible length.
    // With a partner leaf, the split of coverage between the two tips is
    // re-optimized for every trial position.
    MaybeCandidate end_refit(std::size_t x, double window, std::size_t partner = kNone) const {
        const std::size_t ai = inc_.arcs[x][0];
        const bool at_end = net_.mr_arcs[ai].v1 == x;
        const std::size_t ei = inc_.edges[x][0];
        const std::size_t T = other(net_.edges[ei], x);
        if (partner == T) partner = kNone;
        const double s0 = arc_end_param(net_.mr_arcs[ai], x);
        std::size_t e2 = kNone, u2 = kNone;
        Vec2 d2;
        if (partner != kNone) {
            e2 = inc_.edges[partner][0];
            u2 = other(net_.edges[e2], partner);
            if (u2 == x || u2 == T) return std::nullopt;
            d2 = unit(net_.vertices[partner] - net_.vertices[u2]);
        }
        auto build = [&](double s, double ell, double ell2) {
            EmbeddedNetwork c = net_;
            if (!set_arc_end(ctx_, c.mr_arcs[ai], x, s)) return EmbeddedNetwork{};
            const auto cp = ctx_.Mr->at(s);
            c.vertices[x] = cp.point;
            c.vertices[T] = cp.point + ell * (at_end ? cp.tangent : -cp.tangent);
            if (partner != kNone) c.vertices[partner] = c.vertices[u2] + ell2 * d2;
            return c;
        };
        struct Fit {
            double ell = kInf, ell2 = 0.0, total = kInf;
        };
        auto fit = [&](double s) {
            Fit out;
            const auto cp = ctx_.Mr->at(s);
            const Vec2 dir = at_end ? cp.tangent : -cp.tangent;
            if (partner == kNone) {
                const auto base = build(s, 0.0, 0.0);
                if (base.empty()) return out;
                const auto l = tip_reach(ctx_, gaps_without_tip(ctx_, base, ei, T, x), cp.point, dir);
                if (!l) return out;
                out.ell = *l;
                out.total = length(build(s, *l, 0.0));
                return out;
            }
            auto reach2 = [&](double l1) {
                const auto c = build(s, l1, 0.0);
                if (c.empty()) return std::optional<double>{};
                return tip_reach(ctx_, gaps_without_tip(ctx_, c, e2, partner, u2), c.vertices[u2], d2);
            };
            const auto base = build(s, 0.0, 0.0);
            if (base.empty()) return out;
            const auto alone = tip_reach(ctx_, gaps_without_tip(ctx_, base, ei, T, x), cp.point, dir);
            const double hi = alone ? *alone : 2.0 * dist(net_.vertices[x], net_.vertices[T]) + ctx_.r;
            auto g = [&](double l1) {
                const auto l2 = reach2(l1);
                return l2 ? l1 + *l2 : kInf;
            };
            const auto [l1, sum] = golden_min(g, 0.0, hi, 1e-11 * ctx_.R);
            if (!std::isfinite(sum)) return out;
            out.ell = l1;
            out.ell2 = *reach2(l1);
            out.total = length(build(s, out.ell, out.ell2));
            return out;
        };
        const auto [s, len] = golden_min([&](double s) { return fit(s).total; }, s0 - window, s0 + window,
                                         1e-10 * ctx_.R);
        if (!std::isfinite(len)) return std::nullopt;
        const Fit best = fit(s);
        return Candidate{build(s, best.ell, best.ell2)};
    }

    // Direction of a free tip by golden search, shortest feasible length.
    MaybeCandidate leaf_refit(std::size_t t, double window) const {
        const std::size_t ei = inc_.edges[t][0];
        const std::size_t u = other(net_.edges[ei], t);
        const Point U = net_.vertices[u];
        const Vec2 d0 = net_.vertices[t] - U;
        const double th0 = std::atan2(d0.y, d0.x);
        const auto gaps = gaps_without_tip(ctx_, net_, ei, t, u);
        auto f = [&](double th) {
            const auto l = tip_reach(ctx_, gaps, U, polar(th));
            return l ? *l : kInf;
        };
        const auto [th, ell] = golden_min(f, th0 - window, th0 + window, 1e-10);
        if (!std::isfinite(ell)) return std::nullopt;
        Candidate c{net_};
        c.net.vertices[t] = U + polar(th, ell);
        return c;
    }

    // Lengthens one tip by delta and re-minimizes the other.
    MaybeCandidate tip_trade(std::size_t t1, std::size_t t2, double window) const {
        const std::size_t u1 = other(net_.edges[inc_.edges[t1][0]], t1);
        const std::size_t e2 = inc_.edges[t2][0];
        const std::size_t u2 = other(net_.edges[e2], t2);
        if (u1 == t2 || u2 == t1) return std::nullopt;
        const Point U1 = net_.vertices[u1], U2 = net_.vertices[u2];
        const Vec2 d1 = unit(net_.vertices[t1] - U1), d2 = unit(net_.vertices[t2] - U2);
        const double l1 = dist(net_.vertices[t1], U1);
        auto other_len = [&](double delta) {
            EmbeddedNetwork c = net_;
            c.vertices[t1] = U1 + (l1 + delta) * d1;
            return tip_reach(ctx_, gaps_without_tip(ctx_, std::move(c), e2, t2, u2), U2, d2);
        };
        auto f = [&](double delta) {
            if (l1 + delta <= 0.0) return kInf;
            const auto b = other_len(delta);
            return b ? l1 + delta + *b : kInf;
        };
        const auto [delta, total] = golden_min(f, std::max(-l1, -window), window, 1e-11 * ctx_.R);
        if (!std::isfinite(total)) return std::nullopt;
        Candidate c{net_};
        c.net.vertices[t1] = U1 + (l1 + delta) * d1;
        c.net.vertices[t2] = U2 + *other_len(delta) * d2;
        return c;
    }

    // Cuts a sub-arc and hangs tangent tips at the new ends.
    MaybeCandidate open_loop(std::size_t ai, double center_frac, double half) const {
        const MrArc a = net_.mr_arcs[ai];
        const double len = a.arc.length;
        const double c = center_frac * len, c1 = c - half, c2 = c + half;
        const double margin = 1e-9 * ctx_.R;
        if (c1 <= margin || c2 >= len - margin) return std::nullopt;
        const ConvexCurve& Mr = *ctx_.Mr;
        const Point A = normal_foot(ctx_.M, Mr.at(a.arc.s_start + c), ctx_.r).point;
        const auto Y1 = Mr.at(a.arc.s_start + c1), Y2 = Mr.at(a.arc.s_start + c2);
        auto rule = [&](Point base, Vec2 dir) {
            const double t0 = dot(A - base, dir), h = std::abs(cross(dir, A - base));
            return std::max(0.0, h > ctx_.r ? t0 : t0 - std::sqrt(ctx_.r * ctx_.r - h * h));
        };
        const double e1 = rule(Y1.point, Y1.tangent), e2 = rule(Y2.point, -Y2.tangent);
        auto build = [&](double extra) {
            EmbeddedNetwork n = net_;
            erase_at(n.mr_arcs, ai);
            const auto y1 = n.add_vertex(Y1.point), y2 = n.add_vertex(Y2.point);
            n.mr_arcs.push_back({CurveArc{a.arc.s_start, c1}, a.v0, y1});
            n.mr_arcs.push_back({CurveArc{Mr.wrap(a.arc.s_start + c2), len - c2}, y2, a.v1});
            n.add_edge(y1, n.add_vertex(Y1.point + (e1 + extra) * Y1.tangent));
            n.add_edge(y2, n.add_vertex(Y2.point - (e2 + extra) * Y2.tangent));
            n.arc_curve = ctx_.Mr;
            return n;
        };
        const auto extra = min_feasible(ctx_, build, ctx_.r);
        if (!extra) return std::nullopt;
        return Candidate{build(*extra)};
    }

    MaybeCandidate drop_edge(std::size_t e) const {
        Candidate c{net_};
        erase_at(c.net.edges, e);
        return c;
    }

    // Shortens a dangling arc from its free end as far as coverage allows.
    MaybeCandidate trim_arc(std::size_t x) const {
        const std::size_t ai = inc_.arcs[x][0];
        const MrArc a = net_.mr_arcs[ai];
        const bool at_end = a.v1 == x;
        auto build = [&](double keep) {
            EmbeddedNetwork n = net_;
            auto& b = n.mr_arcs[ai];
            if (!at_end) b.arc.s_start = ctx_.Mr->wrap(a.arc.s_end() - keep);
            b.arc.length = keep;
            n.vertices[x] = ctx_.Mr->point(at_end ? a.arc.s_start + keep : b.arc.s_start);
            return n;
        };
        const auto keep = min_feasible(ctx_, build, a.arc.length);
        if (!keep || *keep >= a.arc.length) return std::nullopt;
        return Candidate{build(*keep)};
    }

    // Pulls a dangling arc end back and hangs a tangent tip of the shortest
    // covering length at the new end.
    MaybeCandidate sprout(std::size_t x, double window) const {
        if (net_.vertices.size() >= kMaxVertices) return std::nullopt;
        const std::size_t ai = inc_.arcs[x][0];
        const MrArc a = net_.mr_arcs[ai];
        const bool at_end = a.v1 == x;
        const double reach = std::min(window, a.arc.length - 1e-6 * ctx_.R);
        if (reach <= 0.0) return std::nullopt;
        auto build = [&](double cut, double ell) {
            EmbeddedNetwork n = net_;
            auto& b = n.mr_arcs[ai];
            if (!at_end) b.arc.s_start = ctx_.Mr->wrap(a.arc.s_start + cut);
            b.arc.length = a.arc.length - cut;
            const auto cp = ctx_.Mr->at(at_end ? a.arc.s_start + b.arc.length : b.arc.s_start);
            n.vertices[x] = cp.point;
            if (ell > 0.0) n.add_edge(x, n.add_vertex(cp.point + ell * (at_end ? cp.tangent : -cp.tangent)));
            return n;
        };
        auto tip = [&](double cut) -> std::optional<double> {
            const auto base = build(cut, 0.0);
            const auto cp = ctx_.Mr->at(at_end ? a.arc.s_start + a.arc.length - cut : a.arc.s_start + cut);
            const auto gaps = uncovered_arcs(primitives(base), ctx_.M, ctx_.r, 1e-9);
            return tip_reach(ctx_, gaps, cp.point, at_end ? cp.tangent : -cp.tangent);
        };
        auto total = [&](double cut) {
            const auto l = tip(cut);
            return l ? a.arc.length - cut + *l : kInf;
        };
        const auto [cut, len] = golden_min(total, 0.0, reach, 1e-11 * ctx_.R);
        if (!std::isfinite(len)) return std::nullopt;
        return Candidate{build(cut, *tip(cut))};
    }

    // Degree 2 with an angle under 2pi/3: replace the corner by a Fermat tree.
    // Degree 3: move the vertex to the Fermat point of its neighbours.
    MaybeCandidate branch(std::size_t v, double frac) const {
        const Point P = net_.vertices[v];
        if (inc_.edges[v].size() == 3) {
            std::array<Point, 3> q;
            for (int k = 0; k < 3; ++k) q[k] = net_.vertices[other(net_.edges[inc_.edges[v][k]], v)];
            try {
                const auto f = fermat_point(q[0], q[1], q[2]);
                if (!f.steiner_point) return std::nullopt;
                Candidate c{net_};
                c.net.vertices[v] = *f.steiner_point;
                return c;
            } catch (const std::invalid_argument&) {
                return std::nullopt;
            }
        }
        if (net_.vertices.size() + 3 > kMaxVertices) return std::nullopt;
        const std::size_t i = inc_.edges[v][0], j = inc_.edges[v][1];
        const std::size_t a = other(net_.edges[i], v), b = other(net_.edges[j], v);
        const Vec2 da = net_.vertices[a] - P, db = net_.vertices[b] - P;
        if (std::acos(std::clamp(dot(unit(da), unit(db)), -1.0, 1.0)) >= 2.0 * kPi / 3.0 - 1e-9) return std::nullopt;
        const double d = frac * std::min(norm(da), norm(db));
        const Point A = P + d * unit(da), B = P + d * unit(db);
        const auto f = fermat_point(P, A, B);
        if (!f.steiner_point) return std::nullopt;
        Candidate c{net_};
        erase_at(c.net.edges, std::max(i, j));
        erase_at(c.net.edges, std::min(i, j));
        const auto ia = c.net.add_vertex(A), ib = c.net.add_vertex(B), is = c.net.add_vertex(*f.steiner_point);
        c.net.add_edge(a, ia);
        c.net.add_edge(b, ib);
        c.net.add_edge(is, ia);
        c.net.add_edge(is, ib);
        c.net.add_edge(is, v);
        return c;
    }

private:
    const Ctx& ctx_;
    const EmbeddedNetwork& net_;
    const std::vector<bool>& mask_;
    Incidence inc_;
};

template <class Pred>
std::vector<std::size_t> vertices_where(std::size_t n, Pred&& pred) {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < n; ++v)
        if (pred(v)) out.push_back(v);
    return out;
}

bool structurally_ok(const EmbeddedNetwork& n) { return !n.empty() && is_connected(n); }

bool certify_with(const Ctx& ctx, const EmbeddedNetwork& net, const std::vector<bool>& mask0, double tol,
                  EmbeddedNetwork* improved) {
    if (!ctx.feasible(net)) return false;
    const double base = length(net);
    const Moves mv(ctx, net, mask0);
    const auto& inc = mv.inc();
    const std::size_t nv = net.vertices.size();
    auto better = [&](MaybeCandidate c) {
        if (!c) return false;
        std::vector<bool> mask = mask0;
        normalize(ctx, c->net, mask);
        if (!structurally_ok(c->net) || !(length(c->net) < base - tol) || !ctx.feasible(c->net)) return false;
        if (improved) *improved = std::move(c->net);
        return true;
    };

    const std::array<double, 3> scales{1e-2, 1e-4, 1e-6};
    for (std::size_t v = 0; v < nv; ++v) {
        if (!mv.plain(v)) continue;
        for (double sc : scales)
            for (int k = 0; k < 8; ++k)
                if (better(mv.shift(v, polar(kTwoPi * k / 8, sc * ctx.R)))) return false;
    }
    for (std::size_t v = 0; v < nv; ++v) {
        if (!mv.attached(v)) continue;
        for (double sc : scales)
            for (double sg : {-1.0, 1.0})
                if (better(mv.attached_shift(v, sg * sc * ctx.R))) return false;
    }
    for (std::size_t v = 0; v < nv; ++v) {
        if (!mv.two_edges(v)) continue;
        if (better(mv.shortcut(v)) || better(mv.wrap(v))) return false;
    }
    for (std::size_t v = 0; v < nv; ++v)
        if (mv.arc_junction(v) && better(mv.reattach(v))) return false;
    for (std::size_t v = 0; v < nv; ++v)
        if (mv.end_refit_ok(v) && better(mv.end_refit(v, 0.2 * ctx.R))) return false;
    const auto leaves = vertices_where(nv, [&](std::size_t v) { return mv.leaf(v); });
    for (std::size_t v = 0; v < nv; ++v)
        if (mv.end_refit_ok(v))
            for (auto t : leaves)
                if (better(mv.end_refit(v, 0.2 * ctx.R, t))) return false;
    for (auto t : leaves)
        if (better(mv.leaf_refit(t, 0.5))) return false;
    for (auto t1 : leaves)
        for (auto t2 : leaves)
            if (t1 != t2 && better(mv.tip_trade(t1, t2, 0.2 * ctx.R))) return false;
    for (auto t : leaves)
        if (better(mv.drop_edge(inc.edges[t][0]))) return false;
    for (std::size_t v = 0; v < nv; ++v) {
        if (!mv.bare_arc_end(v)) continue;
        if (better(mv.trim_arc(v))) return false;
        for (double w : {1e-4, 1e-2, 0.2})
            if (better(mv.sprout(v, w * ctx.R))) return false;
    }
    for (std::size_t e = 0; e < net.edges.size(); ++e)
        if (better(mv.drop_edge(e))) return false;
    for (std::size_t v = 0; v < nv; ++v) {
        if (mv.three_edges(v) && better(mv.branch(v, 0.0))) return false;
        if (mv.two_edges(v))
            for (double f : {0.05, 0.2, 0.5})
                if (better(mv.branch(v, f))) return false;
    }
    for (std::size_t ai = 0; ai < net.mr_arcs.size(); ++ai)
        for (int k = 1; k < 16; ++k)
            for (double h : {0.1, 0.3, 0.6, 1.0})
                if (better(mv.open_loop(ai, k / 16.0, h * ctx.r))) return false;
    return true;
}

std::optional<Candidate> propose(const Ctx& ctx, const SearchState& st, MoveKind kind, std::mt19937_64& rng) {
    const Moves mv(ctx, st.net, st.free_vertex_mask);
    const auto& inc = mv.inc();
    const std::size_t nv = st.net.vertices.size();
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    auto pick = [&](const std::vector<std::size_t>& v) -> std::size_t {
        return v.empty() ? kNone : v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    auto pick_where = [&](auto&& pred) { return pick(vertices_where(nv, pred)); };

    switch (kind) {
        case MoveKind::VertexShift: {
            const auto v = pick_where([&](std::size_t v) { return mv.plain(v); });
            if (v == kNone) return std::nullopt;
            return mv.shift(v, st.shift_scale * Vec2{gauss(rng), gauss(rng)});
        }
        case MoveKind::AttachedShift: {
            const auto v = pick_where([&](std::size_t v) { return mv.attached(v); });
            if (v == kNone) return std::nullopt;
            return mv.attached_shift(v, st.shift_scale * gauss(rng));
        }
        case MoveKind::SplitEdge: {
            if (st.net.edges.empty()) return std::nullopt;
            const auto e = std::uniform_int_distribution<std::size_t>(0, st.net.edges.size() - 1)(rng);
            return mv.split(e, 0.2 + 0.6 * unif(rng));
        }
        case MoveKind::Shortcut: {
            const auto v = pick_where([&](std::size_t v) { return mv.two_edges(v); });
            if (v == kNone) return std::nullopt;
            return mv.shortcut(v);
        }
        case MoveKind::Wrap: {
            const auto v = pick_where([&](std::size_t v) { return mv.two_edges(v); });
            if (v == kNone) return std::nullopt;
            return mv.wrap(v);
        }
        case MoveKind::InsertBranch: {
            const auto v = pick_where([&](std::size_t v) { return mv.two_edges(v) || mv.three_edges(v); });
            if (v == kNone) return std::nullopt;
            return mv.branch(v, 0.05 + 0.45 * unif(rng));
        }
        case MoveKind::TangentReattach: {
            const auto v = pick_where([&](std::size_t v) { return mv.arc_junction(v); });
            if (v == kNone) return std::nullopt;
            return mv.reattach(v);
        }
        case MoveKind::EndRefit: {
            const auto v = pick_where([&](std::size_t v) { return mv.end_refit_ok(v); });
            if (v == kNone) return std::nullopt;
            const auto leaves = vertices_where(nv, [&](std::size_t v) { return mv.leaf(v); });
            const auto partner = unif(rng) < 0.3 ? kNone : pick(leaves);
            return mv.end_refit(v, std::max(2.0 * st.shift_scale, 1e-6 * ctx.R) * (0.5 + unif(rng)), partner);
        }
        case MoveKind::LeafRefit: {
            const auto v = pick_where([&](std::size_t v) { return mv.leaf(v); });
            if (v == kNone) return std::nullopt;
            return mv.leaf_refit(v, 0.5 * unif(rng) + 1e-4);
        }
        case MoveKind::TipTrade: {
            const auto leaves = vertices_where(nv, [&](std::size_t v) { return mv.leaf(v); });
            if (leaves.size() < 2) return std::nullopt;
            const auto a = pick(leaves);
            auto b = pick(leaves);
            if (a == b) return std::nullopt;
            return mv.tip_trade(a, b, std::max(2.0 * st.shift_scale, 1e-6 * ctx.R) * (0.5 + unif(rng)));
        }
        case MoveKind::OpenLoop: {
            if (st.net.mr_arcs.empty()) return std::nullopt;
            const auto ai = std::uniform_int_distribution<std::size_t>(0, st.net.mr_arcs.size() - 1)(rng);
            return mv.open_loop(ai, unif(rng), unif(rng) * ctx.r);
        }
        case MoveKind::DeleteRedundant: {
            const auto bare = vertices_where(nv, [&](std::size_t v) { return mv.bare_arc_end(v); });
            if (!bare.empty() && unif(rng) < 0.5) {
                const auto v = pick(bare);
                if (unif(rng) < 0.5) return mv.trim_arc(v);
                return mv.sprout(v, std::max(2.0 * st.shift_scale, 1e-6 * ctx.R) * (0.5 + unif(rng)));
            }
            if (st.net.edges.empty()) return std::nullopt;
            const auto e = std::uniform_int_distribution<std::size_t>(0, st.net.edges.size() - 1)(rng);
            return mv.drop_edge(e);
        }
    }
    (void)inc;
    return std::nullopt;
}

constexpr std::array<double, kMoveKinds> kWeights{4.0, 3.0, 0.3, 0.5, 0.5, 0.5, 1.0, 0.5, 0.5, 0.5, 0.3, 0.3};

}  // namespace

std::string to_string(MoveKind kind) {
    switch (kind) {
        case MoveKind::VertexShift: return "vertex_shift";
        case MoveKind::AttachedShift: return "attached_shift";
        case MoveKind::SplitEdge: return "split_edge";
        case MoveKind::Shortcut: return "shortcut";
        case MoveKind::InsertBranch: return "insert_branch";
        case MoveKind::Wrap: return "wrap";
        case MoveKind::TangentReattach: return "tangent_reattach";
        case MoveKind::EndRefit: return "end_refit";
        case MoveKind::LeafRefit: return "leaf_refit";
        case MoveKind::TipTrade: return "tip_trade";
        case MoveKind::OpenLoop: return "open_loop";
        case MoveKind::DeleteRedundant: return "delete_redundant";
    }
    return "unknown";
}

bool MoveSet::enabled(MoveKind kind) const {
    switch (kind) {
        case MoveKind::VertexShift:
        case MoveKind::AttachedShift: return vertex_shift;
        case MoveKind::SplitEdge: return split_edge;
        case MoveKind::Shortcut: return merge_collinear;
        case MoveKind::InsertBranch: return insert_branch;
        case MoveKind::Wrap:
        case MoveKind::TangentReattach:
        case MoveKind::OpenLoop: return snap_to_arc;
        case MoveKind::EndRefit:
        case MoveKind::LeafRefit:
        case MoveKind::TipTrade:
        case MoveKind::DeleteRedundant: return delete_redundant;
    }
    return false;
}

SearchState make_search_state(EmbeddedNetwork net, const ConvexCurve& M, double r, std::uint64_t seed) {
    const Ctx ctx = make_ctx(M, r, net.arc_curve);
    SearchState st;
    net.arc_curve = ctx.Mr;
    st.net = std::move(net);
    st.free_vertex_mask.assign(st.net.vertices.size(), true);
    normalize(ctx, st.net, st.free_vertex_mask);
    st.rng_seed = seed;
    st.rng.seed(seed);
    st.shift_scale = 0.05 * ctx.R;
    st.feasible = ctx.feasible(st.net);
    st.best_length = kInf;
    if (st.feasible) {
        st.best_feasible = st.net;
        st.best_length = length(st.net);
    }
    return st;
}

SearchState improve(SearchState st, const ConvexCurve& M, double r, long iterations, const MoveSet& moves) {
    const Ctx ctx = make_ctx(M, r, st.net.arc_curve);
    st.net.arc_curve = ctx.Mr;
    std::vector<double> weights(kMoveKinds, 0.0);
    for (std::size_t k = 0; k < kMoveKinds; ++k)
        if (moves.enabled(static_cast<MoveKind>(k))) weights[k] = kWeights[k];
    if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; })) return st;
    std::discrete_distribution<std::size_t> kinds(weights.begin(), weights.end());

    auto objective = [&](const EmbeddedNetwork& n, bool feas) {
        return feas ? length(n) : length(n) + st.penalty_weight * ctx.excess(n);
    };
    double cur = objective(st.net, st.feasible);
    long rejects = 0;
    // Progress check: a window of moves that gains almost nothing also
    // triggers certification.
    long window = 0;
    double window_start = cur;
    auto accept = [&](EmbeddedNetwork n, std::vector<bool> mask, bool feas, double obj) {
        st.net = std::move(n);
        st.free_vertex_mask = std::move(mask);
        st.feasible = feas;
        cur = obj;
        ++st.accepted;
        rejects = 0;
        if (feas && length(st.net) < st.best_length) {
            st.best_length = length(st.net);
            st.best_feasible = st.net;
        }
    };

    for (long it = 0; it < iterations && !st.certified; ++it) {
        ++st.moves;
        bool stalled = false;
        if (++window >= kCertifyAfter) {
            stalled = st.feasible && window_start - cur < 1e-6 * ctx.R;
            window = 0;
            window_start = cur;
        }
        if (st.feasible && (rejects >= kCertifyAfter || stalled)) {
            EmbeddedNetwork better;
            if (certify_with(ctx, st.net, st.free_vertex_mask, 1e-9, &better)) {
                st.certified = true;
                break;
            }
            std::vector<bool> mask(better.vertices.size(), true);
            normalize(ctx, better, mask);
            const double len = length(better);
            accept(std::move(better), std::move(mask), true, len);
            st.shift_scale = 0.05 * ctx.R;
            continue;
        }
        const auto kind = static_cast<MoveKind>(kinds(st.rng));
        const bool shift = kind == MoveKind::VertexShift || kind == MoveKind::AttachedShift;
        auto reject = [&] {
            ++rejects;
            if (shift) st.shift_scale = std::max(st.shift_scale * 0.97, 1e-9 * ctx.R);
            if (!st.feasible && rejects % 200 == 0) {
                st.penalty_weight *= 2.0;
                cur = objective(st.net, false);
            }
        };
        auto cand = propose(ctx, st, kind, st.rng);
        if (!cand) {
            reject();
            continue;
        }
        std::vector<bool> mask = st.free_vertex_mask;
        normalize(ctx, cand->net, mask);
        if (!structurally_ok(cand->net)) {
            reject();
            continue;
        }
        const bool feas = ctx.feasible(cand->net);
        const double len = length(cand->net);
        bool ok;
        double obj = len;
        if (st.feasible) {
            ok = feas && (len < cur - 1e-13 || (cand->neutral && len <= cur + 1e-13));
        } else {
            obj = objective(cand->net, feas);
            ok = obj < cur - 1e-13 || feas;
        }
        if (!ok) {
            reject();
            continue;
        }
        accept(std::move(cand->net), std::move(mask), feas, obj);
        ++st.accepted_by_kind[static_cast<std::size_t>(kind)];
        if (shift) st.shift_scale = std::min(st.shift_scale * 1.5, 0.5 * ctx.R);
    }
    return st;
}

bool certify_local_min(const EmbeddedNetwork& net, const ConvexCurve& M, double r, double tol,
                       EmbeddedNetwork* improved) {
    const Ctx ctx = make_ctx(M, r, net.arc_curve);
    EmbeddedNetwork n = net;
    n.arc_curve = ctx.Mr;
    std::vector<bool> mask(n.vertices.size(), true);
    return certify_with(ctx, n, mask, tol, improved);
}

// ---- seeds -------------------------------------------------------------------

namespace {

EmbeddedNetwork closed_polygon(const std::vector<Point>& pts) {
    EmbeddedNetwork net;
    for (auto p : pts) net.add_vertex(p);
    for (std::size_t i = 0; i < pts.size(); ++i) net.add_edge(i, (i + 1) % pts.size());
    return net;
}

// Polygon of tangent lines to M_r at the given outward normal angles (listed
// clockwise), each pushed outward by its offset.
std::vector<Point> tangent_polygon(const ConvexCurve& Mr, const std::vector<double>& angles,
                                   const std::vector<double>& push) {
    const double rho = Mr.min_curvature_radius();
    std::vector<Vec2> n;
    std::vector<double> h;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        n.push_back(polar(angles[i]));
        double best = -kInf;
        for (auto c : Mr.core()) best = std::max(best, dot(c, n.back()));
        h.push_back(best + rho + push[i]);
    }
    std::vector<Point> pts;
    for (std::size_t i = 0; i < n.size(); ++i) {
        const std::size_t j = (i + 1) % n.size();
        const double det = cross(n[i], n[j]);
        if (std::abs(det) < 1e-12) return {};
        pts.push_back(Point{(h[i] * n[j].y - h[j] * n[i].y) / det, (n[i].x * h[j] - n[j].x * h[i]) / det});
    }
    return pts;
}

std::vector<Point> random_circumscribed(const ConvexCurve& M, const ConvexCurve& Mr, double r, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif;
    const int k = std::uniform_int_distribution<int>(6, 12)(rng);
    const double th0 = kTwoPi * unif(rng);
    std::vector<double> angles;
    for (int i = 0; i < k; ++i) angles.push_back(th0 - kTwoPi * (i + 0.4 * (unif(rng) - 0.5)) / k);
    // Normals of flat pieces keep edges flush with long straight parts.
    for (const auto& p : Mr.pieces())
        if (!p.is_corner) {
            const Vec2 nrm = perp_ccw(p.direction);
            angles.push_back(std::atan2(nrm.y, nrm.x));
        }
    for (auto& a : angles) a = normalize_positive(a);
    std::sort(angles.begin(), angles.end(), std::greater<>());
    std::vector<double> kept;
    for (double a : angles)
        if (kept.empty() || kept.back() - a > 1e-3) kept.push_back(a);
    if (kept.size() > 2 && kept.front() - kept.back() > kTwoPi - 1e-3) kept.pop_back();
    std::vector<double> push;
    for (std::size_t i = 0; i < kept.size(); ++i) push.push_back(0.05 * r * unif(rng));
    (void)M;
    return tangent_polygon(Mr, kept, push);
}

}  // namespace

EmbeddedNetwork seed_perturbed_horseshoe(const ConvexCurve& M, double r, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif;
    const double scale = std::sqrt(2.0 * M.min_curvature_radius() * r);
    for (int attempt = 0; attempt < 200; ++attempt) {
        const double c = M.arc_length() * unif(rng);
        const double shrink = std::pow(0.97, attempt);
        const double gl = scale * (0.3 + 1.2 * unif(rng)) * shrink, gr = scale * (0.3 + 1.2 * unif(rng)) * shrink;
        try {
            auto net = horseshoe_network(M, build_horseshoe(M, r, {c, gl, gr}));
            // Vertex order: right end, left end, left tip, right tip.
            for (auto [base, tip] : {std::pair{1, 2}, std::pair{0, 3}})
                net.vertices[tip] = net.vertices[base] + (1.0 + 0.3 * unif(rng)) * (net.vertices[tip] - net.vertices[base]);
            return net;
        } catch (const InfeasibleGap&) {
        }
    }
    return {};
}

EmbeddedNetwork seed_inner_loop(const ConvexCurve& M, double r, std::mt19937_64& rng) {
    auto Mr = std::make_shared<const ConvexCurve>(M.offset_inward(r));
    const double s = Mr->arc_length() * std::uniform_real_distribution<double>()(rng);
    EmbeddedNetwork net;
    const auto v = net.add_vertex(Mr->point(s));
    net.mr_arcs.push_back({CurveArc{s, Mr->arc_length()}, v, v});
    net.arc_curve = Mr;
    return net;
}

EmbeddedNetwork seed_polygon(const ConvexCurve& M, double r, std::mt19937_64& rng) {
    const ConvexCurve Mr = M.offset_inward(r);
    for (int attempt = 0; attempt < 50; ++attempt) {
        const auto pts = random_circumscribed(M, Mr, r, rng);
        if (pts.size() < 3) continue;
        auto net = closed_polygon(pts);
        if (covers_exactly(primitives(net), M, r)) return net;
    }
    return {};
}

EmbeddedNetwork seed_open_polygon(const ConvexCurve& M, double r, std::mt19937_64& rng) {
    const ConvexCurve Mr = M.offset_inward(r);
    std::uniform_real_distribution<double> unif;
    for (int attempt = 0; attempt < 50; ++attempt) {
        const auto pts = random_circumscribed(M, Mr, r, rng);
        if (pts.size() < 3) continue;
        const Point A = M.point(M.arc_length() * unif(rng));
        std::size_t cut = 0;
        double best = kInf;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double d = dist_point_segment(A, Segment{pts[i], pts[(i + 1) % pts.size()]});
            if (d < best) {
                best = d;
                cut = i;
            }
        }
        const std::size_t n = pts.size();
        const std::size_t P = cut, Q = (cut + 1) % n;
        auto build = [&](double reach) {
            EmbeddedNetwork net;
            for (auto p : pts) net.add_vertex(p);
            for (std::size_t i = 0; i < n; ++i)
                if (i != cut) net.add_edge(i, (i + 1) % n);
            for (auto v : {P, Q}) {
                const double d = dist(pts[v], A);
                const double ell = std::max(0.0, d - r + reach);
                if (ell > 0.0) net.add_edge(v, net.add_vertex(pts[v] + ell * unit(A - pts[v])));
            }
            return net;
        };
        // Shortest reach past the ball around A that still covers.
        double lo = 0.0, hi = r;
        if (!covers_exactly(primitives(build(hi)), M, r)) continue;
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            (covers_exactly(primitives(build(mid)), M, r) ? hi : lo) = mid;
        }
        return build(hi);
    }
    return {};
}

EmbeddedNetwork seed_chord_tangents(const ConvexCurve& M, double r, std::mt19937_64& rng) {
    auto Mr = std::make_shared<const ConvexCurve>(M.offset_inward(r));
    const double s1 = Mr->arc_length() * std::uniform_real_distribution<double>()(rng);
    const double s2 = s1 + 0.5 * Mr->arc_length();
    const auto X = Mr->at(s1), Y = Mr->at(s2);
    auto build = [&](double ell) {
        EmbeddedNetwork net;
        const auto x = net.add_vertex(X.point), y = net.add_vertex(Y.point);
        net.add_edge(x, y);
        for (auto [v, cp] : {std::pair{x, X}, std::pair{y, Y}}) {
            net.add_edge(v, net.add_vertex(cp.point + ell * cp.tangent));
            net.add_edge(v, net.add_vertex(cp.point - ell * cp.tangent));
        }
        return net;
    };
    const double R = M.min_curvature_radius();
    double lo = 0.0, hi = 2.0 * R;
    if (!covers_exactly(primitives(build(hi)), M, r)) return build(R);
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (covers_exactly(primitives(build(mid)), M, r) ? hi : lo) = mid;
    }
    return build(hi);
}

namespace {

EmbeddedNetwork seed_of_family(const ConvexCurve& M, double r, const std::string& family, std::mt19937_64& rng) {
    if (family == "horseshoe") return seed_perturbed_horseshoe(M, r, rng);
    if (family == "loop") return seed_inner_loop(M, r, rng);
    if (family == "polygon") return seed_polygon(M, r, rng);
    if (family == "open_polygon") return seed_open_polygon(M, r, rng);
    if (family == "chord_tangents") return seed_chord_tangents(M, r, rng);
    if (family == "optimal_horseshoe") return horseshoe_network(M, optimal_horseshoe(M, r));
    if (family == "tripod_chain") {
        if (M.kind() != CurveKind::Stadium || M.min_curvature_radius() != 1.0 || M.spine_origin() != Point{})
            return {};
        try {
            return stadium_competitor(M.spine_length(), r);
        } catch (const std::invalid_argument&) {
            return {};
        }
    }
    throw std::invalid_argument("unknown seed family: " + family);
}

}  // namespace

std::vector<Seed> random_feasible_seeds(const ConvexCurve& M, double r, int count, std::uint64_t rng_seed) {
    static const std::array<std::string, 4> families{"horseshoe", "loop", "polygon", "open_polygon"};
    std::mt19937_64 rng(rng_seed);
    std::vector<Seed> out;
    for (int i = 0, tries = 0; static_cast<int>(out.size()) < count && tries < 50 * count; ++tries) {
        const auto& fam = families[std::uniform_int_distribution<std::size_t>(0, families.size() - 1)(rng)];
        auto net = seed_of_family(M, r, fam, rng);
        if (net.empty() || !covers_exactly(primitives(net), M, r)) continue;
        out.push_back({"random-" + std::to_string(i++) + "-" + fam, std::move(net)});
    }
    return out;
}

std::vector<Seed> seeds_by_family(const ConvexCurve& M, double r, const std::vector<std::string>& families,
                                  int per_family, std::uint64_t rng_seed) {
    std::mt19937_64 rng(rng_seed);
    std::vector<Seed> out;
    for (const auto& fam : families) {
        const bool single = fam == "optimal_horseshoe" || fam == "tripod_chain";
        for (int i = 0; i < (single ? 1 : per_family); ++i) {
            auto net = seed_of_family(M, r, fam, rng);
            if (net.empty()) continue;
            out.push_back({fam + "-" + std::to_string(i), std::move(net)});
        }
    }
    return out;
}

std::vector<SearchResult> search_minimizer(const ConvexCurve& M, double r, const std::vector<Seed>& seeds, long budget,
                                           std::uint64_t rng_seed, const MoveSet& moves) {
    std::vector<SearchResult> out;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        SearchResult res;
        res.seed_id = seeds[i].id;
        res.initial_length = length(seeds[i].net);
        auto st = make_search_state(seeds[i].net, M, r, rng_seed + i);
        if (budget > 0) st = improve(std::move(st), M, r, budget, moves);
        res.feasible = std::isfinite(st.best_length);
        res.net = res.feasible ? st.best_feasible : st.net;
        res.final_length = length(res.net);
        res.certified = st.certified;
        res.moves = st.moves;
        res.verdict = verify_horseshoe_structure(res.net, M, r);
        res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(res));
    }
    std::stable_sort(out.begin(), out.end(), [](const SearchResult& a, const SearchResult& b) {
        if (a.feasible != b.feasible) return a.feasible;
        return a.final_length < b.final_length;
    });
    return out;
}

double local_gap_check(const ConvexCurve& M, double r, const EmbeddedNetwork& net) {
    if (verify_horseshoe_structure(net, M, r).passed)
        throw InputNotLocallyMinimal("network is a horseshoe");
    if (!certify_local_min(net, M, r)) throw InputNotLocallyMinimal("an improving move exists");
    return length(net) - optimal_horseshoe(M, r).length();
}

}  // namespace mdm

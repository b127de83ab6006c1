#include "mdm/coverage.hpp"

#include <algorithm>
#include <limits>

namespace mdm {

CoverageReport covers(std::span<const Primitive> z, const ConvexCurve& M, const CurveArc& q, double r,
                      int n_samples) {
    if (n_samples < 2) throw std::invalid_argument("covers: n_samples must be at least 2");
    CoverageReport rep;
    rep.worst_dist = -1.0;
    rep.slack = 0.5 * q.length / n_samples;
    const int n = q.length > 0.0 ? n_samples : 1;
    for (int i = 0; i < n; ++i) {
        const double s = q.s_start + (i + 0.5) * q.length / n;
        const Point p = M.point(s);
        const double d = dist_point_set(p, z);
        if (d > rep.worst_dist) {
            rep.worst_dist = d;
            rep.worst_point = M.at(s);
        }
    }
    rep.covered = rep.worst_dist <= r + rep.slack;
    return rep;
}

double max_sampled_distance(std::span<const Primitive> z, const ConvexCurve& M, int n_samples,
                            CurvePoint* worst) {
    double best = -1.0;
    double best_s = 0.0;
    const double L = M.arc_length();
    for (int i = 0; i < n_samples; ++i) {
        const double s = (i + 0.5) * L / n_samples;
        const double d = dist_point_set(M.point(s), z);
        if (d > best) {
            best = d;
            best_s = s;
        }
    }
    if (worst) *worst = M.at(best_s);
    return best;
}

namespace {

struct LineBoundary {
    Point p;
    Vec2 n;  // unit normal
};

struct CircleBoundary {
    Point c;
    double radius;
};

struct Boundaries {
    std::vector<LineBoundary> lines;
    std::vector<CircleBoundary> circles;
};

void collect_boundaries(const Primitive& prim, double r, Boundaries& out) {
    if (const auto* s = std::get_if<Segment>(&prim)) {
        out.circles.push_back({s->a, r});
        if (s->length() == 0.0) return;
        out.circles.push_back({s->b, r});
        const Vec2 d = s->direction();
        const Vec2 n = perp_ccw(d);
        out.lines.push_back({s->a + r * n, n});
        out.lines.push_back({s->a - r * n, n});
        out.lines.push_back({s->a, d});
        out.lines.push_back({s->b, d});
        return;
    }
    const auto& a = std::get<CircularArc>(prim);
    out.circles.push_back({a.center, a.radius + r});
    if (std::abs(a.radius - r) > 0.0) out.circles.push_back({a.center, std::abs(a.radius - r)});
    const Point s = a.start(), e = a.end();
    out.circles.push_back({s, r});
    out.circles.push_back({e, r});
    out.lines.push_back({a.center, perp_ccw(unit(s - a.center))});
    out.lines.push_back({a.center, perp_ccw(unit(e - a.center))});
}

// Crossings of one piece of M with the collected boundaries, as local offsets.
void piece_breakpoints(const ConvexCurve::Piece& piece, double rho, const Boundaries& b,
                       std::vector<double>& us) {
    auto keep = [&](double u) {
        if (u > 0.0 && u < piece.length) us.push_back(u);
    };
    if (!piece.is_corner) {
        for (const auto& l : b.lines)
            if (auto t = line_line_param(piece.start, piece.direction, l.p, l.n)) keep(*t);
        for (const auto& c : b.circles)
            for (double t : line_circle_params(piece.start, piece.direction, c.c, c.radius)) keep(t);
        return;
    }
    auto to_u = [&](Point x) {
        const double th = std::atan2(x.y - piece.center.y, x.x - piece.center.x);
        keep(rho * normalize_positive(piece.normal_start - th));
    };
    for (const auto& l : b.lines) {
        const Vec2 dir = perp_ccw(l.n);
        for (double t : line_circle_params(l.p, dir, piece.center, rho)) to_u(l.p + t * dir);
    }
    for (const auto& c : b.circles)
        for (Point x : circle_circle_points(piece.center, rho, c.c, c.radius)) to_u(x);
}

}  // namespace

std::vector<CurveArc> uncovered_arcs(std::span<const Primitive> z, const ConvexCurve& M, double r,
                                     double tol) {
    const double L = M.arc_length();
    if (z.empty()) return {CurveArc{0.0, L}};
    Boundaries b;
    for (const auto& prim : z) collect_boundaries(prim, r, b);

    std::vector<std::pair<double, double>> bad;
    std::vector<double> us;
    const double rho = M.min_curvature_radius();
    for (const auto& piece : M.pieces()) {
        us.assign({0.0, piece.length});
        piece_breakpoints(piece, rho, b, us);
        std::sort(us.begin(), us.end());
        for (std::size_t i = 0; i + 1 < us.size(); ++i) {
            const double u0 = us[i], u1 = us[i + 1];
            if (u1 - u0 <= 1e-14 * std::max(1.0, L)) continue;
            const Point mid = M.point(piece.s0 + 0.5 * (u0 + u1));
            if (dist_point_set(mid, z) > r + tol) {
                const double a = piece.s0 + u0, e = piece.s0 + u1;
                if (!bad.empty() && a - bad.back().second <= 1e-12 * std::max(1.0, L))
                    bad.back().second = e;
                else
                    bad.emplace_back(a, e);
            }
        }
    }
    if (bad.size() >= 2 && bad.front().first <= 1e-12 * L && bad.back().second >= L * (1 - 1e-15) - 1e-12) {
        bad.front().first = bad.back().first - L;
        bad.pop_back();
    }
    std::vector<CurveArc> out;
    for (const auto& [a, e] : bad) out.push_back(CurveArc{M.wrap(a), std::min(e - a, L)});
    return out;
}

std::vector<CurveArc> covered_arcs(std::span<const Primitive> z, const ConvexCurve& M, double r, double tol) {
    const auto gaps = uncovered_arcs(z, M, r, tol);
    const double L = M.arc_length();
    if (gaps.empty()) return {CurveArc{0.0, L}};
    std::vector<CurveArc> sorted = gaps;
    std::sort(sorted.begin(), sorted.end(),
              [](const CurveArc& a, const CurveArc& b) { return a.s_start < b.s_start; });
    std::vector<CurveArc> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const CurveArc& g = sorted[i];
        const CurveArc& next = sorted[(i + 1) % sorted.size()];
        double len = next.s_start - g.s_end();
        if (sorted.size() == 1) len = L - g.length;
        while (len < 0.0) len += L;
        if (len >= L) len -= L;
        if (len > 0.0 || sorted.size() == 1) out.push_back(CurveArc{M.wrap(g.s_end()), len});
    }
    return out;
}

bool covers_exactly(std::span<const Primitive> z, const ConvexCurve& M, double r, double tol) {
    return uncovered_arcs(z, M, r, tol).empty();
}

}  // namespace mdm

#include "mdm/curves.hpp"

#include <algorithm>
#include <limits>

namespace mdm {

std::string to_string(CurveKind kind) {
    switch (kind) {
        case CurveKind::Circle: return "circle";
        case CurveKind::Stadium: return "stadium";
        case CurveKind::SmoothedPolygon: return "smoothed_polygon";
    }
    return "unknown";
}

namespace {

double signed_area(const std::vector<Point>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * a;
}

// Intersection of the lines {dot(x, n1) = d1} and {dot(x, n2) = d2}.
Point meet(Vec2 n1, double d1, Vec2 n2, double d2) {
    const double det = cross(n1, n2);
    return {(d1 * n2.y - d2 * n1.y) / det, (n1.x * d2 - n2.x * d1) / det};
}

// Offsets every edge line of a clockwise polygon by `delta` along its outward
// normal and returns the new corner points.
std::vector<Point> offset_polygon(const std::vector<Point>& poly, double delta) {
    const std::size_t k = poly.size();
    std::vector<Vec2> normals(k);
    std::vector<double> levels(k);
    for (std::size_t i = 0; i < k; ++i) {
        normals[i] = perp_ccw(unit(poly[(i + 1) % k] - poly[i]));
        levels[i] = dot(poly[i], normals[i]) + delta;
    }
    std::vector<Point> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t prev = (i + k - 1) % k;
        out[i] = meet(normals[prev], levels[prev], normals[i], levels[i]);
    }
    return out;
}

}  // namespace

ConvexCurve::ConvexCurve(CurveKind kind, std::vector<Point> core, double rho)
    : kind_(kind), core_(std::move(core)), rho_(rho) {
    build_pieces();
}

ConvexCurve ConvexCurve::circle(Point center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius) || !is_finite(center))
        throw std::invalid_argument("circle: radius must be positive and finite");
    return ConvexCurve(CurveKind::Circle, {center}, radius);
}

ConvexCurve ConvexCurve::stadium(double spine_length, double cap_radius, Point origin) {
    if (!(spine_length > 0.0) || !(cap_radius > 0.0) || !std::isfinite(spine_length) ||
        !std::isfinite(cap_radius))
        throw std::invalid_argument("stadium: spine length and cap radius must be positive");
    return ConvexCurve(CurveKind::Stadium, {origin, origin + Vec2{spine_length, 0.0}}, cap_radius);
}

ConvexCurve ConvexCurve::smoothed_polygon(std::vector<Point> outer, double corner_radius) {
    if (outer.size() < 3) throw std::invalid_argument("smoothed_polygon: need at least 3 vertices");
    if (!(corner_radius > 0.0)) throw std::invalid_argument("smoothed_polygon: corner radius must be positive");
    if (signed_area(outer) > 0.0) std::reverse(outer.begin(), outer.end());
    const std::size_t k = outer.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2 e1 = outer[(i + 1) % k] - outer[i];
        const Vec2 e2 = outer[(i + 2) % k] - outer[(i + 1) % k];
        if (!(cross(e1, e2) < -1e-12 * norm(e1) * norm(e2)))
            throw std::invalid_argument("smoothed_polygon: vertices must form a strictly convex polygon");
    }
    std::vector<Point> core = offset_polygon(outer, -corner_radius);
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2 before = outer[(i + 1) % k] - outer[i];
        const Vec2 after = core[(i + 1) % k] - core[i];
        if (dot(before, after) <= 1e-12 * dot(before, before))
            throw std::invalid_argument("smoothed_polygon: corner radius too large for the polygon");
    }
    return ConvexCurve(CurveKind::SmoothedPolygon, std::move(core), corner_radius);
}

void ConvexCurve::build_pieces() {
    pieces_.clear();
    const std::size_t k = core_.size();
    if (k == 1) {
        pieces_.push_back(Piece{true, 0.0, kTwoPi * rho_, core_[0], kPi / 2.0, {}, {}});
        length_ = kTwoPi * rho_;
        return;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const Point a = core_[i], b = core_[(i + 1) % k], c = core_[(i + 2) % k];
        const Vec2 d1 = unit(b - a), d2 = unit(c - b);
        const Vec2 n1 = perp_ccw(d1), n2 = perp_ccw(d2);
        Piece flat;
        flat.s0 = s;
        flat.length = dist(a, b);
        flat.start = a + rho_ * n1;
        flat.direction = d1;
        pieces_.push_back(flat);
        s += flat.length;
        const double a1 = std::atan2(n1.y, n1.x), a2 = std::atan2(n2.y, n2.x);
        double sweep = normalize_positive(a1 - a2);
        if (k == 2) sweep = kPi;
        Piece corner;
        corner.is_corner = true;
        corner.s0 = s;
        corner.length = rho_ * sweep;
        corner.center = b;
        corner.normal_start = a1;
        pieces_.push_back(corner);
        s += corner.length;
    }
    length_ = s;
}

double ConvexCurve::spine_length() const {
    return core_.size() == 2 ? dist(core_[0], core_[1]) : 0.0;
}

std::vector<Point> ConvexCurve::outer_vertices() const {
    if (core_.size() < 3) return core_;
    return offset_polygon(core_, rho_);
}

double ConvexCurve::wrap(double s) const {
    double w = std::fmod(s, length_);
    if (w < 0.0) w += length_;
    if (w >= length_) w = 0.0;
    return w;
}

std::size_t ConvexCurve::piece_index(double s) const {
    const double w = wrap(s);
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), w,
                               [](double v, const Piece& p) { return v < p.s0; });
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - pieces_.begin()) - 1));
}

Point ConvexCurve::point(double s) const { return at(s).point; }

CurvePoint ConvexCurve::at(double s) const {
    const double w = wrap(s);
    const Piece& p = pieces_[piece_index(w)];
    const double u = w - p.s0;
    CurvePoint cp;
    cp.s = w;
    if (p.is_corner) {
        const double ang = p.normal_start - u / rho_;
        cp.outward_normal = polar(ang);
        cp.point = p.center + rho_ * cp.outward_normal;
    } else {
        cp.outward_normal = perp_ccw(p.direction);
        cp.point = p.start + u * p.direction;
    }
    cp.tangent = perp_cw(cp.outward_normal);
    return cp;
}

double ConvexCurve::project(Point q) const {
    double best_d = std::numeric_limits<double>::infinity();
    double best_s = 0.0;
    for (const Piece& p : pieces_) {
        double u = 0.0, d = 0.0;
        if (p.is_corner) {
            const Vec2 rel = q - p.center;
            const double rn = norm(rel);
            const double sweep = p.length / rho_;
            const double off = rn > 0.0 ? normalize_positive(p.normal_start - std::atan2(rel.y, rel.x)) : 0.0;
            if (off <= sweep) {
                u = rho_ * off;
                d = std::abs(rn - rho_);
            } else {
                u = (kTwoPi - off) < (off - sweep) ? 0.0 : p.length;
                d = dist(q, p.center + rho_ * polar(p.normal_start - u / rho_));
            }
        } else {
            u = std::clamp(dot(q - p.start, p.direction), 0.0, p.length);
            d = dist(q, p.start + u * p.direction);
        }
        if (d < best_d) {
            best_d = d;
            best_s = p.s0 + u;
        }
    }
    return wrap(best_s);
}

double ConvexCurve::signed_distance(Point q) const {
    const std::size_t k = core_.size();
    if (k == 1) return dist(q, core_[0]) - rho_;
    if (k == 2) return dist_point_segment(q, Segment{core_[0], core_[1]}) - rho_;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2 n = perp_ccw(unit(core_[(i + 1) % k] - core_[i]));
        worst = std::max(worst, dot(q - core_[i], n));
    }
    if (worst <= 0.0) return worst - rho_;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i)
        d = std::min(d, dist_point_segment(q, Segment{core_[i], core_[(i + 1) % k]}));
    return d - rho_;
}

ConvexCurve ConvexCurve::offset_inward(double r) const {
    if (!(r >= 0.0)) throw InvalidErosion("erosion distance must be non-negative");
    if (r >= rho_) throw InvalidErosion("erosion distance must be below the minimal curvature radius");
    return ConvexCurve(kind_, core_, rho_ - r);
}

std::vector<Primitive> ConvexCurve::as_primitives() const { return arc_primitives(CurveArc{0.0, length_}); }

std::vector<Primitive> ConvexCurve::arc_primitives(const CurveArc& arc) const {
    std::vector<Primitive> out;
    const double total = std::clamp(arc.length, 0.0, length_);
    const double s0 = wrap(arc.s_start);
    if (total <= 0.0) {
        const Point p = point(s0);
        out.push_back(Segment{p, p});
        return out;
    }
    std::size_t j = piece_index(s0);
    double u0 = s0 - pieces_[j].s0;
    double remaining = total;
    for (std::size_t guard = 0; remaining > 1e-15 && guard < 2 * pieces_.size() + 2; ++guard) {
        const Piece& p = pieces_[j];
        const double take = std::min(remaining, p.length - u0);
        if (take > 1e-15) {
            const double u1 = u0 + take;
            if (p.is_corner)
                out.push_back(CircularArc{p.center, rho_, p.normal_start - u0 / rho_,
                                          p.normal_start - u1 / rho_, Orientation::Clockwise});
            else
                out.push_back(Segment{p.start + u0 * p.direction, p.start + u1 * p.direction});
        }
        remaining -= std::max(take, 0.0);
        j = (j + 1) % pieces_.size();
        u0 = 0.0;
    }
    return out;
}

double ConvexCurve::turning(const CurveArc& arc) const {
    double t = 0.0;
    for (const auto& prim : arc_primitives(arc))
        if (const auto* a = std::get_if<CircularArc>(&prim)) t += a->extent();
    return t;
}

CurveArc ConvexCurve::arc_between(double s0, double s1) const {
    return CurveArc{wrap(s0), wrap(s1 - s0)};
}

bool ConvexCurve::arc_contains(const CurveArc& arc, double s, double tol) const {
    const double d = wrap(s - arc.s_start);
    return d <= arc.length + tol || d >= length_ - tol;
}

double min_curvature_radius(const ConvexCurve& c) { return c.min_curvature_radius(); }

ConvexCurve inner_curve(const ConvexCurve& c, double r) {
    if (!(r > 0.0)) throw InvalidErosion("erosion distance must be positive");
    return c.offset_inward(r);
}

CurvePoint normal_foot(const ConvexCurve& M, const CurvePoint& x, double r) {
    return M.at(M.project(x.point + r * x.outward_normal));
}

}  // namespace mdm

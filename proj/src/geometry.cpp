#include "mdm/geometry.hpp"

#include <algorithm>
#include <limits>

namespace mdm {

double normalize_angle(double a) {
    double r = std::remainder(a, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

double normalize_positive(double a) {
    double r = std::fmod(a, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

Ray::Ray(Point origin, Vec2 direction) : origin_(origin), direction_(direction) {
    if (!is_finite(origin) || std::abs(norm(direction) - 1.0) > 1e-12)
        throw std::invalid_argument("Ray: direction must be a unit vector");
}

Ray Ray::through(Point from, Point to) {
    const Vec2 d = to - from;
    if (norm(d) == 0.0) throw std::invalid_argument("Ray::through: coincident points");
    return Ray(from, unit(d));
}

double CircularArc::extent() const {
    return orientation == Orientation::CounterClockwise ? end_angle - start_angle
                                                        : start_angle - end_angle;
}

double CircularArc::angle_at(double u) const {
    return start_angle + u * (end_angle - start_angle);
}

Vec2 CircularArc::tangent_at(double u) const {
    const Vec2 radial = polar(angle_at(u));
    return orientation == Orientation::CounterClockwise ? perp_ccw(radial) : perp_cw(radial);
}

bool CircularArc::spans(double angle) const {
    const double ext = extent();
    if (ext >= kTwoPi - 1e-15) return true;
    const double d = orientation == Orientation::CounterClockwise
                         ? normalize_positive(angle - start_angle)
                         : normalize_positive(start_angle - angle);
    return d <= ext || d >= kTwoPi - 1e-15;
}

CircularArc CircularArc::from_sweep(Point center, double radius, double start, double sweep) {
    return CircularArc{center, radius, start, start + sweep,
                       sweep >= 0.0 ? Orientation::CounterClockwise : Orientation::Clockwise};
}

void CircularArc::validate() const {
    if (!(radius > 0.0)) throw std::invalid_argument("CircularArc: radius must be positive");
    const double ext = extent();
    if (ext < -1e-12 || ext > kTwoPi + 1e-12)
        throw std::invalid_argument("CircularArc: extent outside [0, 2pi]");
}

Point closest_point_segment(Point p, const Segment& s) {
    const Vec2 d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 == 0.0) return s.a;
    const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return s.a + t * d;
}

double dist_point_segment(Point p, const Segment& s) { return dist(p, closest_point_segment(p, s)); }

Point closest_point_arc(Point p, const CircularArc& arc) {
    const Vec2 rel = p - arc.center;
    if (rel.x == 0.0 && rel.y == 0.0) return arc.start();
    const double theta = std::atan2(rel.y, rel.x);
    if (arc.spans(theta)) return arc.center + polar(theta, arc.radius);
    const Point s = arc.start(), e = arc.end();
    return dist(p, s) <= dist(p, e) ? s : e;
}

double dist_point_arc(Point p, const CircularArc& arc) {
    const Vec2 rel = p - arc.center;
    const double rho = norm(rel);
    if (rho == 0.0) return arc.radius;
    if (arc.spans(std::atan2(rel.y, rel.x))) return std::abs(rho - arc.radius);
    return std::min(dist(p, arc.start()), dist(p, arc.end()));
}

double dist_point_primitive(Point p, const Primitive& prim) {
    return std::visit(
        [&](const auto& x) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Segment>)
                return dist_point_segment(p, x);
            else
                return dist_point_arc(p, x);
        },
        prim);
}

double dist_point_set(Point p, std::span<const Primitive> set) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& prim : set) best = std::min(best, dist_point_primitive(p, prim));
    return best;
}

double primitive_length(const Primitive& prim) {
    return std::visit([](const auto& x) { return x.length(); }, prim);
}

Point primitive_at(const Primitive& prim, double u) {
    return std::visit([u](const auto& x) { return x.at(u); }, prim);
}

Point primitive_start(const Primitive& prim) { return primitive_at(prim, 0.0); }
Point primitive_end(const Primitive& prim) { return primitive_at(prim, 1.0); }

Vec2 primitive_start_tangent(const Primitive& prim) {
    if (const auto* s = std::get_if<Segment>(&prim)) return s->direction();
    return std::get<CircularArc>(prim).tangent_at(0.0);
}

Vec2 primitive_end_tangent(const Primitive& prim) {
    if (const auto* s = std::get_if<Segment>(&prim)) return s->direction();
    return std::get<CircularArc>(prim).tangent_at(1.0);
}

Primitive reversed(const Primitive& prim) {
    if (const auto* s = std::get_if<Segment>(&prim)) return Segment{s->b, s->a};
    const auto& a = std::get<CircularArc>(prim);
    return CircularArc{a.center, a.radius, a.end_angle, a.start_angle,
                       a.orientation == Orientation::Clockwise ? Orientation::CounterClockwise
                                                               : Orientation::Clockwise};
}

double directed_angle(Vec2 d1, Vec2 d2) {
    return normalize_angle(-std::atan2(cross(d1, d2), dot(d1, d2)));
}

double directed_angle(const Ray& r1, const Ray& r2) {
    return directed_angle(r1.direction(), r2.direction());
}

std::vector<double> line_circle_params(Point p, Vec2 d, Point c, double radius) {
    const Vec2 w = p - c;
    const double b = dot(d, w);
    const double cc = dot(w, w) - radius * radius;
    const double disc = b * b - cc;
    const double scale = std::max(1.0, radius * radius);
    if (disc < -1e-13 * scale) return {};
    if (disc <= 1e-13 * scale) return {-b};
    const double s = std::sqrt(disc);
    return {-b - s, -b + s};
}

std::vector<Point> circle_circle_points(Point c1, double r1, Point c2, double r2) {
    const Vec2 dv = c2 - c1;
    const double d = norm(dv);
    if (d < 1e-15) return {};
    const double a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    const double h2 = r1 * r1 - a * a;
    const Vec2 ex = dv / d;
    const Point base = c1 + a * ex;
    const double scale = std::max(1.0, r1 * r1);
    if (h2 < -1e-13 * scale) return {};
    if (h2 <= 1e-13 * scale) return {base};
    const double h = std::sqrt(h2);
    return {base + h * perp_ccw(ex), base - h * perp_ccw(ex)};
}

std::optional<double> line_line_param(Point p, Vec2 d, Point q, Vec2 n) {
    const double den = dot(d, n);
    if (std::abs(den) < 1e-15) return std::nullopt;
    return dot(q - p, n) / den;
}

namespace {

Primitive sub_primitive(const Primitive& prim, double u0, double u1) {
    if (const auto* s = std::get_if<Segment>(&prim)) return Segment{s->at(u0), s->at(u1)};
    const auto& a = std::get<CircularArc>(prim);
    return CircularArc{a.center, a.radius, a.angle_at(u0), a.angle_at(u1), a.orientation};
}

// Fractions along `prim` where it meets the circle (c, rho).
std::vector<double> circle_crossings(const Primitive& prim, Point c, double rho) {
    std::vector<double> us;
    if (const auto* s = std::get_if<Segment>(&prim)) {
        const double len = s->length();
        if (len == 0.0) return us;
        for (double t : line_circle_params(s->a, s->direction(), c, rho)) us.push_back(t / len);
    } else {
        const auto& a = std::get<CircularArc>(prim);
        const double ext = a.extent();
        if (ext <= 0.0) return us;
        for (Point x : circle_circle_points(a.center, a.radius, c, rho)) {
            const double th = std::atan2(x.y - a.center.y, x.x - a.center.x);
            const double d = a.orientation == Orientation::CounterClockwise
                                 ? normalize_positive(th - a.start_angle)
                                 : normalize_positive(a.start_angle - th);
            us.push_back(d / ext);
        }
    }
    return us;
}

}  // namespace

std::vector<Primitive> remove_open_disk(const Primitive& prim, Point c, double rho) {
    std::vector<double> cuts{0.0, 1.0};
    for (double u : circle_crossings(prim, c, rho))
        if (u > 0.0 && u < 1.0) cuts.push_back(u);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Primitive> out;
    double open_start = -1.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double u0 = cuts[i], u1 = cuts[i + 1];
        const bool keep = dist(primitive_at(prim, 0.5 * (u0 + u1)), c) >= rho;
        if (keep && open_start < 0.0) open_start = u0;
        if (!keep && open_start >= 0.0) {
            out.push_back(sub_primitive(prim, open_start, u0));
            open_start = -1.0;
        }
    }
    if (open_start >= 0.0) out.push_back(sub_primitive(prim, open_start, 1.0));
    return out;
}

}  // namespace mdm

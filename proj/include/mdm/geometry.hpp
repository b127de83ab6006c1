// Planar primitives: points, segments, rays, circular arcs, distances and
// clockwise directed angles.
#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

namespace mdm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double k) { x *= k; y *= k; return *this; }
    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
    friend constexpr Vec2 operator*(double k, Vec2 a) { return {k * a.x, k * a.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double k) { return {k * a.x, k * a.y}; }
    friend constexpr Vec2 operator/(Vec2 a, double k) { return {a.x / k, a.y / k}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

using Point = Vec2;

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(b - a); }
constexpr Vec2 perp_ccw(Vec2 a) { return {-a.y, a.x}; }
constexpr Vec2 perp_cw(Vec2 a) { return {a.y, -a.x}; }
inline Vec2 unit(Vec2 a) {
    const double n = norm(a);
    return n > 0.0 ? a / n : Vec2{};
}
inline Vec2 polar(double angle, double radius = 1.0) {
    return {radius * std::cos(angle), radius * std::sin(angle)};
}
inline Vec2 rotate(Vec2 a, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * a.x - s * a.y, s * a.x + c * a.y};
}
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Maps any angle into (-pi, pi].
double normalize_angle(double a);
// Maps any angle into [0, 2pi).
double normalize_positive(double a);

struct Segment {
    Point a;
    Point b;

    double length() const { return dist(a, b); }
    Point at(double t) const { return a + t * (b - a); }
    Vec2 direction() const { return unit(b - a); }
    bool degenerate() const { return a == b; }
};

class Ray {
public:
    // Throws std::invalid_argument when direction is not unit within 1e-12.
    Ray(Point origin, Vec2 direction);
    static Ray through(Point from, Point to);

    Point origin() const { return origin_; }
    Vec2 direction() const { return direction_; }

private:
    Point origin_;
    Vec2 direction_;
};

enum class Orientation { Clockwise, CounterClockwise };

// Angles are measured counterclockwise from +x in the usual math convention.
// end_angle is not normalized: the swept extent is end - start for a
// counterclockwise arc and start - end for a clockwise one, in [0, 2pi].
struct CircularArc {
    Point center;
    double radius = 1.0;
    double start_angle = 0.0;
    double end_angle = kTwoPi;
    Orientation orientation = Orientation::CounterClockwise;

    double extent() const;
    double length() const { return radius * extent(); }
    // Angle at fraction u in [0, 1] of the way from start to end.
    double angle_at(double u) const;
    Point at(double u) const { return center + polar(angle_at(u), radius); }
    Point start() const { return at(0.0); }
    Point end() const { return at(1.0); }
    // Unit tangent along the orientation at fraction u.
    Vec2 tangent_at(double u) const;
    // True when the direction angle lies within the swept span.
    bool spans(double angle) const;
    // Builds an arc from start point angle, signed sweep (negative = clockwise).
    static CircularArc from_sweep(Point center, double radius, double start, double sweep);
    // Signed sweep: positive counterclockwise.
    double signed_sweep() const {
        return orientation == Orientation::CounterClockwise ? extent() : -extent();
    }
    void validate() const;
};

// A piece of an embedded network or curve: straight segment or circular arc.
using Primitive = std::variant<Segment, CircularArc>;

double dist_point_segment(Point p, const Segment& s);
Point closest_point_segment(Point p, const Segment& s);
double dist_point_arc(Point p, const CircularArc& arc);
Point closest_point_arc(Point p, const CircularArc& arc);
double dist_point_primitive(Point p, const Primitive& prim);
double dist_point_set(Point p, std::span<const Primitive> set);

double primitive_length(const Primitive& prim);
Point primitive_start(const Primitive& prim);
Point primitive_end(const Primitive& prim);
Vec2 primitive_start_tangent(const Primitive& prim);
Vec2 primitive_end_tangent(const Primitive& prim);
Point primitive_at(const Primitive& prim, double u);
Primitive reversed(const Primitive& prim);

// Signed angle from r1 to r2 with clockwise rotation counted positive,
// normalized to (-pi, pi].
double directed_angle(const Ray& r1, const Ray& r2);
double directed_angle(Vec2 d1, Vec2 d2);

// Pieces of `prim` that lie outside the open disk B_rho(c).
std::vector<Primitive> remove_open_disk(const Primitive& prim, Point c, double rho);

// Intersections of the infinite line through p with direction d (unit) and the
// circle (c, radius); returns the line parameters t of p + t d.
std::vector<double> line_circle_params(Point p, Vec2 d, Point c, double radius);
// Intersection points of two circles (empty when disjoint or concentric).
std::vector<Point> circle_circle_points(Point c1, double r1, Point c2, double r2);
// Parameter t of p + t d where it crosses the line {x : dot(x - q, n) = 0}.
std::optional<double> line_line_param(Point p, Vec2 d, Point q, Vec2 n);

}  // namespace mdm

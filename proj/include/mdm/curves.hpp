// Analytic convex curves (circle, stadium, smoothed polygon), their erosions,
// arc-length parameterization and normal feet.
//
// Every supported curve is the boundary of core ⊕ B_rho where core is a
// point, a segment or a convex polygon. The curve is traversed clockwise and
// alternates flat pieces (parallel to core edges) with circular corner pieces
// of radius rho centred at core vertices.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdm/geometry.hpp"

namespace mdm {

class InvalidErosion : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class CurveKind { Circle, Stadium, SmoothedPolygon };

std::string to_string(CurveKind kind);

struct CurvePoint {
    double s = 0.0;
    Point point;
    Vec2 outward_normal;
    Vec2 tangent;  // clockwise direction of travel
};

// Sub-arc of a closed curve, traversed clockwise from s_start.
struct CurveArc {
    double s_start = 0.0;
    double length = 0.0;

    double s_end() const { return s_start + length; }
};

class ConvexCurve {
public:
    struct Piece {
        bool is_corner = false;
        double s0 = 0.0;
        double length = 0.0;
        // Corner: centre is the core vertex, normal angle decreases from
        // normal_start by length / rho. Flat: starts at `start` along `direction`.
        Point center;
        double normal_start = 0.0;
        Point start;
        Vec2 direction;
    };

    static ConvexCurve circle(Point center, double radius);
    // Spine from origin to origin + (spine_length, 0), caps of radius cap_radius.
    static ConvexCurve stadium(double spine_length, double cap_radius, Point origin = {});
    // Outer polygon (either orientation, strictly convex) with every corner
    // filleted by a circle of radius corner_radius.
    static ConvexCurve smoothed_polygon(std::vector<Point> outer_vertices, double corner_radius);

    CurveKind kind() const { return kind_; }
    double arc_length() const { return length_; }
    double min_curvature_radius() const { return rho_; }
    const std::vector<Point>& core() const { return core_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    // Kind-specific parameters for serialization.
    Point circle_center() const { return core_.front(); }
    double circle_radius() const { return rho_; }
    double spine_length() const;
    Point spine_origin() const { return core_.front(); }
    std::vector<Point> outer_vertices() const;

    // Maps s into [0, L).
    double wrap(double s) const;
    std::size_t piece_index(double s) const;
    Point point(double s) const;
    CurvePoint at(double s) const;
    // Arc-length parameter of the nearest curve point.
    double project(Point p) const;
    // Negative inside the enclosed body, positive outside.
    double signed_distance(Point p) const;
    bool contains(Point p, double tol = 0.0) const { return signed_distance(p) <= tol; }

    // Boundary of the body eroded by r; r may be zero. Same piece structure.
    ConvexCurve offset_inward(double r) const;

    std::vector<Primitive> as_primitives() const;
    std::vector<Primitive> arc_primitives(const CurveArc& arc) const;
    // Total tangent rotation along the arc, clockwise positive.
    double turning(const CurveArc& arc) const;
    // Clockwise arc from s0 to s1 (length in [0, L)).
    CurveArc arc_between(double s0, double s1) const;
    bool arc_contains(const CurveArc& arc, double s, double tol = 0.0) const;

private:
    ConvexCurve(CurveKind kind, std::vector<Point> core, double rho);
    void build_pieces();

    CurveKind kind_;
    std::vector<Point> core_;  // clockwise
    double rho_;
    std::vector<Piece> pieces_;
    double length_ = 0.0;
};

double min_curvature_radius(const ConvexCurve& c);
// Boundary of N_r. Throws InvalidErosion unless 0 < r < min_curvature_radius.
ConvexCurve inner_curve(const ConvexCurve& c, double r);
// Foot on M of a point x on M_r: the point at distance r along x's outward normal.
CurvePoint normal_foot(const ConvexCurve& M, const CurvePoint& x, double r);

}  // namespace mdm

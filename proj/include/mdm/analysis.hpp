// Analyses of covering networks: energetic points, turning, the component
// graph of a network relative to N_r and the turning decomposition of the
// region bounded by the network and the two tip radii.
#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdm/network.hpp"

namespace mdm {

class NonContiguousPieces : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class AmbiguousCrossing : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NotAPath : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NoCommonCoveredPoint : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- turning -------------------------------------------------------------

// Smooth turning of each piece plus directed corner angles between
// consecutive pieces (and from last to first when closed). Clockwise positive.
double turning(std::span<const Primitive> pieces, bool closed);
// Turning of a single primitive (clockwise arcs positive).
double primitive_turning(const Primitive& prim);

// ---- chord bound ---------------------------------------------------------

// Upper bound on the length of a segment of a minimizer inside Int(N_r):
// 2r sqrt(1 - r^2 / 4R^2) for a circle of radius R, 2r otherwise.
double chord_length_bound(const ConvexCurve& M, double r);

// ---- energetic points ----------------------------------------------------

struct PointClass {
    enum class Label { NonIsolatedEnergetic, IsolatedEnergetic, NonEnergetic };
    Label label = Label::NonEnergetic;
    std::optional<CurvePoint> witness;

    bool energetic() const { return label != Label::NonEnergetic; }
};

std::string to_string(PointClass::Label label);

// {1e-3, 1e-2, 5e-2} scaled by the minimal curvature radius of M.
std::vector<double> default_rho_grid(const ConvexCurve& M);

// x is energetic when removing the open ball B_rho(x) from the network
// uncovers part of M at radius r + 1e-6 R for every rho in the grid.
PointClass classify_point(const EmbeddedNetwork& net, const ConvexCurve& M, double r, Point x,
                          std::span<const double> rho_grid);
PointClass classify_point(const EmbeddedNetwork& net, const ConvexCurve& M, double r, Point x);

// Same test on a raw primitive set.
bool removal_uncovers(std::span<const Primitive> prims, const ConvexCurve& M, double r, Point x, double rho,
                      double tol_energy, CurvePoint* witness = nullptr);

// ---- component graph -----------------------------------------------------

struct GraphNode {
    enum class Kind { Component, Arc };
    Kind kind = Kind::Component;
    std::vector<Primitive> pieces;
    std::vector<Point> entering_points;   // points on M_r
    std::vector<Point> energetic_points;  // energetic points found off M_r
    int n_energetic = 0;
    int m_entering = 0;
    CurveArc q;               // arc of M covered by the node
    bool q_is_single_arc = true;
    double length() const;
};

struct GraphEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    Point at_a;                   // where the connection leaves node a
    Point at_b;                   // where it reaches node b
    std::vector<Primitive> chord; // connecting chord pieces from at_a to at_b (empty if nodes touch)
};

struct ComponentGraph {
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    std::vector<Primitive> chords;  // pieces of the network inside Int(N_r) (or non-energetic on M_r)

    std::vector<int> node_degrees() const;
    bool is_path() const;
    int count_kind(GraphNode::Kind k) const;
    // Node indices from one degree-1 node to the other; empty if not a path.
    std::vector<std::size_t> path_order() const;
};

ComponentGraph component_graph(const EmbeddedNetwork& net, const ConvexCurve& M, double r);

// ---- turning decomposition -----------------------------------------------

struct NodeTurn {
    std::size_t node = 0;
    GraphNode::Kind kind = GraphNode::Kind::Component;
    double turn_S = 0.0;   // turning of S ∩ ∂T along the clockwise boundary
    double turn_q = 0.0;   // turning of the covered arc q_S of M
    double rhs = 0.0;      // turn_S plus the connector angles (ending nodes)
    double margin = 0.0;   // rhs - turn_q; non-negative when the inequality holds
};

struct TurningDecomposition {
    std::vector<Primitive> boundary;  // ∂T, clockwise
    std::vector<NodeTurn> nodes;      // path order from the left ending node to the right one
    std::size_t left = 0;
    std::size_t right = 0;
    Point A;
    Point tip_left;
    Point tip_right;
    double angle_tip_left = 0.0;   // ∠([C_l S_l'), [S_l' A))
    double angle_left_a = 0.0;     // ∠([S_l' A), a)
    double angle_a_right = 0.0;    // ∠(a, [A S_r'))
    double angle_tip_right = 0.0;  // ∠([A S_r'), [S_r' C_r))
    double junction_turn = 0.0;    // corners where blocks meet outside S_l', A, S_r'
    double chord_turn = 0.0;
    double total = 0.0;            // turning(boundary, closed)
    double total_from_parts = 0.0; // sum of node turns, connector angles and junctions

    bool inequalities_hold(double tol) const;
    double min_margin() const;
};

TurningDecomposition turning_decomposition(const EmbeddedNetwork& net, const ConvexCurve& M, double r);
TurningDecomposition turning_decomposition(const ComponentGraph& g, const ConvexCurve& M, double r);

}  // namespace mdm

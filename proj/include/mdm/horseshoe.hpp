// Horseshoes: an arc of the inner curve continued at both ends by tangent
// segments whose free tips reach within r of a common point A of M.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mdm/analysis.hpp"

namespace mdm {

class InfeasibleGap : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class GridMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Part of M left to the tangent segments. `center` is the arc-length position
// of A on M; the foot arc of the M_r arc ends `left` before A and starts
// `right` after A (clockwise).
struct HorseshoeGap {
    double center = 0.0;
    double left = 0.0;
    double right = 0.0;
    double total() const { return left + right; }
};

struct Horseshoe {
    HorseshoeGap gap;
    CurveArc arc;      // on M_r, clockwise from the right end to the left end
    Segment tangent_left;   // from the left arc end to the left tip
    Segment tangent_right;  // from the right tip to the right arc end
    Point tip_left;
    Point tip_right;
    Point A;
    double r = 0.0;
    bool within_theorem_regime = false;

    double length() const;
    // Vertices: right end, left end, left tip, right tip.
    EmbeddedNetwork network(std::shared_ptr<const ConvexCurve> inner) const;
};

Horseshoe build_horseshoe(const ConvexCurve& M, double r, const HorseshoeGap& gap);
// Network of a horseshoe built on M (owns a copy of M_r).
EmbeddedNetwork horseshoe_network(const ConvexCurve& M, const Horseshoe& h);

struct HorseshoeSearch {
    Horseshoe best;
    std::vector<Horseshoe> local_minima;  // distinct local minima seen on the symmetric grid
};

// Minimizes length over the gap family: symmetric grid and golden-section
// search at each candidate centre, then a coordinate polish that lets the
// two sides differ.
HorseshoeSearch search_horseshoes(const ConvexCurve& M, double r);
Horseshoe optimal_horseshoe(const ConvexCurve& M, double r);

// r < rho_min / 5 (rho_min / 4.98 for a circle).
bool within_theorem_regime(const ConvexCurve& M, double r);

struct StructureReport {
    bool passed = false;
    std::vector<std::string> failures;
    int arcs = 0;
    int tangent_segments = 0;
    double coverage_excess = 0.0;  // max(0, F_M - r) from the exact predicate
};

// Checks that net is one arc of M_r plus two tangent segments ending at
// energetic tips, connected, loop-free and covering M.
StructureReport verify_horseshoe_structure(const EmbeddedNetwork& net, const ConvexCurve& M, double r,
                                           double tol = 1e-6);

// Chain of tripods on the points (kr, +-1) of the stadium with spine [0, t]
// and unit caps, plus two caps of two segments each.
EmbeddedNetwork stadium_competitor(double t, double r);

}  // namespace mdm

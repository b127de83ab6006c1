// Coverage of (parts of) M by the closed r-neighbourhood of a set of primitives.
#pragma once

#include <span>
#include <vector>

#include "mdm/curves.hpp"
#include "mdm/geometry.hpp"

namespace mdm {

struct CoverageReport {
    bool covered = false;
    CurvePoint worst_point;
    double worst_dist = 0.0;
    double slack = 0.0;  // Lipschitz bound on the inter-sample error
};

// Sampled certificate: n_samples arc-length-equispaced cell midpoints of q;
// covered iff the largest sampled distance is at most r + (|q| / n) / 2.
CoverageReport covers(std::span<const Primitive> z, const ConvexCurve& M, const CurveArc& q, double r,
                      int n_samples);

// Exact-up-to-roundoff predicate. Splits each piece of M at every crossing with
// the boundary of some primitive's r-neighbourhood and tests one interior point
// per cell, so uncovered cells are found regardless of their size.
// Cells whose test point is within r + tol are treated as covered.
std::vector<CurveArc> uncovered_arcs(std::span<const Primitive> z, const ConvexCurve& M, double r,
                                     double tol = 1e-9);
std::vector<CurveArc> covered_arcs(std::span<const Primitive> z, const ConvexCurve& M, double r,
                                   double tol = 1e-9);
bool covers_exactly(std::span<const Primitive> z, const ConvexCurve& M, double r, double tol = 1e-9);

// Largest distance from the sampled points of M to z (no slack added).
double max_sampled_distance(std::span<const Primitive> z, const ConvexCurve& M, int n_samples,
                            CurvePoint* worst = nullptr);

}  // namespace mdm

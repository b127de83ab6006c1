// Embedded candidate networks: straight edges plus arcs of an inner curve.
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "mdm/coverage.hpp"
#include "mdm/curves.hpp"

namespace mdm {

struct Edge {
    std::size_t a = 0;
    std::size_t b = 0;
};

// Arc of the support curve running clockwise from vertex v0 to vertex v1.
struct MrArc {
    CurveArc arc;
    std::size_t v0 = 0;
    std::size_t v1 = 0;
};

struct EmbeddedNetwork {
    std::vector<Point> vertices;
    std::vector<Edge> edges;
    std::vector<MrArc> mr_arcs;
    // Curve that mr_arcs live on (M_r); required whenever mr_arcs is non-empty.
    std::shared_ptr<const ConvexCurve> arc_curve;

    bool empty() const { return vertices.empty(); }
    std::size_t add_vertex(Point p) {
        vertices.push_back(p);
        return vertices.size() - 1;
    }
    void add_edge(std::size_t a, std::size_t b) { edges.push_back({a, b}); }
};

// Identifies which piece of the network a primitive came from.
struct PrimitiveSource {
    enum class Kind { Edge, Arc, Vertex } kind = Kind::Edge;
    std::size_t index = 0;
};

double length(const EmbeddedNetwork& net);
// Segments for edges, curve pieces for arcs, degenerate segments for vertices
// that no edge or arc touches.
std::vector<Primitive> primitives(const EmbeddedNetwork& net, std::vector<PrimitiveSource>* sources = nullptr);

// Sampled F_M with n_samples cell midpoints; +infinity for an empty network.
struct EnergyReport {
    double value = 0.0;
    double slack = 0.0;
    CurvePoint worst;
};
EnergyReport energy_report(const EmbeddedNetwork& net, const ConvexCurve& M, int n_samples);
double energy(const EmbeddedNetwork& net, const ConvexCurve& M, int n_samples);

// Vertex classes after identifying vertices closer than tol.
std::vector<std::size_t> vertex_classes(const EmbeddedNetwork& net, double tol = 1e-9);
bool is_connected(const EmbeddedNetwork& net, double tol = 1e-9);
bool has_loop(const EmbeddedNetwork& net, double tol = 1e-9);
// Degree of every vertex class (edges plus arcs; a self-loop counts twice).
std::vector<int> degrees(const EmbeddedNetwork& net, double tol = 1e-9);

// Structural problems: zero-length edges, out-of-range indices, arc ends not on
// their vertices, and pairwise intersecting edge interiors.
std::vector<std::string> validate_network(const EmbeddedNetwork& net, double tol = 1e-9);

// Union of two networks (vertex lists concatenated).
EmbeddedNetwork merge(const EmbeddedNetwork& a, const EmbeddedNetwork& b);

// Default sampling density: MDM_SAMPLES environment variable, else `fallback`.
int default_samples(int fallback = 4096);

}  // namespace mdm

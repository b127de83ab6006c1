#include "mdm/network.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>

namespace mdm {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[b] = a;
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

double length(const EmbeddedNetwork& net) {
    double total = 0.0;
    for (const auto& e : net.edges) total += dist(net.vertices[e.a], net.vertices[e.b]);
    for (const auto& a : net.mr_arcs) total += a.arc.length;
    return total;
}

std::vector<Primitive> primitives(const EmbeddedNetwork& net, std::vector<PrimitiveSource>* sources) {
    std::vector<Primitive> out;
    std::vector<bool> touched(net.vertices.size(), false);
    if (sources) sources->clear();
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
        const auto& e = net.edges[i];
        out.push_back(Segment{net.vertices[e.a], net.vertices[e.b]});
        touched[e.a] = touched[e.b] = true;
        if (sources) sources->push_back({PrimitiveSource::Kind::Edge, i});
    }
    if (!net.mr_arcs.empty() && !net.arc_curve)
        throw std::invalid_argument("network has arcs but no support curve");
    for (std::size_t i = 0; i < net.mr_arcs.size(); ++i) {
        const auto& a = net.mr_arcs[i];
        for (auto& p : net.arc_curve->arc_primitives(a.arc)) {
            out.push_back(std::move(p));
            if (sources) sources->push_back({PrimitiveSource::Kind::Arc, i});
        }
        touched[a.v0] = touched[a.v1] = true;
    }
    for (std::size_t v = 0; v < net.vertices.size(); ++v) {
        if (touched[v]) continue;
        out.push_back(Segment{net.vertices[v], net.vertices[v]});
        if (sources) sources->push_back({PrimitiveSource::Kind::Vertex, v});
    }
    return out;
}

EnergyReport energy_report(const EmbeddedNetwork& net, const ConvexCurve& M, int n_samples) {
    if (n_samples < 8) throw std::invalid_argument("energy: n_samples must be at least 8");
    EnergyReport rep;
    rep.slack = 0.5 * M.arc_length() / n_samples;
    if (net.empty()) {
        rep.value = std::numeric_limits<double>::infinity();
        return rep;
    }
    const auto prims = primitives(net);
    rep.value = max_sampled_distance(prims, M, n_samples, &rep.worst);
    return rep;
}

double energy(const EmbeddedNetwork& net, const ConvexCurve& M, int n_samples) {
    return energy_report(net, M, n_samples).value;
}

std::vector<std::size_t> vertex_classes(const EmbeddedNetwork& net, double tol) {
    const std::size_t n = net.vertices.size();
    DisjointSets ds(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (dist(net.vertices[i], net.vertices[j]) <= tol) ds.unite(i, j);
    std::vector<std::size_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = ds.find(i);
    return cls;
}

bool is_connected(const EmbeddedNetwork& net, double tol) {
    const std::size_t n = net.vertices.size();
    if (n <= 1) return true;
    const auto cls = vertex_classes(net, tol);
    DisjointSets ds(n);
    for (std::size_t i = 0; i < n; ++i) ds.unite(cls[i], i);
    for (const auto& e : net.edges) ds.unite(e.a, e.b);
    for (const auto& a : net.mr_arcs) ds.unite(a.v0, a.v1);
    const std::size_t root = ds.find(0);
    for (std::size_t i = 1; i < n; ++i)
        if (ds.find(i) != root) return false;
    return true;
}

bool has_loop(const EmbeddedNetwork& net, double tol) {
    const std::size_t n = net.vertices.size();
    const auto cls = vertex_classes(net, tol);
    DisjointSets ds(n);
    for (const auto& e : net.edges) {
        if (cls[e.a] == cls[e.b]) continue;  // degenerate edge, not a cycle
        if (!ds.unite(cls[e.a], cls[e.b])) return true;
    }
    for (const auto& a : net.mr_arcs) {
        if (cls[a.v0] == cls[a.v1]) {
            if (a.arc.length > tol) return true;
            continue;
        }
        if (!ds.unite(cls[a.v0], cls[a.v1])) return true;
    }
    return false;
}

std::vector<int> degrees(const EmbeddedNetwork& net, double tol) {
    const auto cls = vertex_classes(net, tol);
    std::vector<int> deg(net.vertices.size(), 0);
    for (const auto& e : net.edges) {
        if (cls[e.a] == cls[e.b]) continue;
        ++deg[cls[e.a]];
        ++deg[cls[e.b]];
    }
    for (const auto& a : net.mr_arcs) {
        ++deg[cls[a.v0]];
        ++deg[cls[a.v1]];
    }
    std::vector<int> out(net.vertices.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = deg[cls[i]];
    return out;
}

namespace {

// True when the open segments (p0,p1) and (q0,q1) share a point.
bool interiors_meet(Point p0, Point p1, Point q0, Point q1, double tol) {
    const Vec2 d = p1 - p0, e = q1 - q0;
    const double den = cross(d, e);
    const double lp = norm(d), lq = norm(e);
    if (std::abs(den) <= 1e-12 * lp * lq) {
        // Parallel: overlap only if collinear with a positive-length common part.
        if (std::abs(cross(d, q0 - p0)) > tol * lp) return false;
        const Vec2 u = d / lp;
        const double a0 = 0.0, a1 = lp;
        double b0 = dot(q0 - p0, u), b1 = dot(q1 - p0, u);
        if (b0 > b1) std::swap(b0, b1);
        return std::min(a1, b1) - std::max(a0, b0) > tol;
    }
    const double t = cross(q0 - p0, e) / den;
    const double s = cross(q0 - p0, d) / den;
    const double et = tol / lp, es = tol / lq;
    return t > et && t < 1.0 - et && s > es && s < 1.0 - es;
}

}  // namespace

std::vector<std::string> validate_network(const EmbeddedNetwork& net, double tol) {
    std::vector<std::string> issues;
    const std::size_t n = net.vertices.size();
    for (std::size_t v = 0; v < n; ++v)
        if (!is_finite(net.vertices[v])) issues.push_back("vertex " + std::to_string(v) + " is not finite");
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
        const auto& e = net.edges[i];
        if (e.a >= n || e.b >= n) {
            issues.push_back("edge " + std::to_string(i) + " has an out-of-range vertex index");
            continue;
        }
        if (dist(net.vertices[e.a], net.vertices[e.b]) <= tol)
            issues.push_back("edge " + std::to_string(i) + " has zero length");
    }
    for (std::size_t i = 0; i < net.mr_arcs.size(); ++i) {
        const auto& a = net.mr_arcs[i];
        if (a.v0 >= n || a.v1 >= n) {
            issues.push_back("arc " + std::to_string(i) + " has an out-of-range vertex index");
            continue;
        }
        if (!net.arc_curve) {
            issues.push_back("arc " + std::to_string(i) + " has no support curve");
            continue;
        }
        if (a.arc.length < 0.0 || a.arc.length > net.arc_curve->arc_length() + tol)
            issues.push_back("arc " + std::to_string(i) + " has invalid length");
        if (dist(net.arc_curve->point(a.arc.s_start), net.vertices[a.v0]) > 1e-7 ||
            dist(net.arc_curve->point(a.arc.s_end()), net.vertices[a.v1]) > 1e-7)
            issues.push_back("arc " + std::to_string(i) + " ends are not at its vertices");
    }
    if (!issues.empty()) return issues;
    for (std::size_t i = 0; i < net.edges.size(); ++i)
        for (std::size_t j = i + 1; j < net.edges.size(); ++j) {
            const auto& e = net.edges[i];
            const auto& f = net.edges[j];
            if (interiors_meet(net.vertices[e.a], net.vertices[e.b], net.vertices[f.a], net.vertices[f.b], tol))
                issues.push_back("edges " + std::to_string(i) + " and " + std::to_string(j) + " cross");
        }
    return issues;
}

EmbeddedNetwork merge(const EmbeddedNetwork& a, const EmbeddedNetwork& b) {
    EmbeddedNetwork out = a;
    const std::size_t off = a.vertices.size();
    out.vertices.insert(out.vertices.end(), b.vertices.begin(), b.vertices.end());
    for (auto e : b.edges) out.edges.push_back({e.a + off, e.b + off});
    for (auto m : b.mr_arcs) out.mr_arcs.push_back({m.arc, m.v0 + off, m.v1 + off});
    if (!out.arc_curve) out.arc_curve = b.arc_curve;
    return out;
}

int default_samples(int fallback) {
    if (const char* env = std::getenv("MDM_SAMPLES")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v >= 8 && v <= 100000000) return static_cast<int>(v);
    }
    return fallback;
}

}  // namespace mdm

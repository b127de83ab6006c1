// Steiner trees on three points and locally minimal networks on up to four
// terminals, one constructor per combinatorial type.
#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdm/network.hpp"

namespace mdm {

class Infeasible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The seven combinatorial types of locally minimal networks on at most four
// terminals. Terminal order matters:
//   Seg2        t0-t1
//   Path3       t0-t1-t2 (t1 is the middle vertex)
//   Tripod3     branch point joined to t0, t1, t2
//   FullSteiner4  two branch points; the first joins t0,t1 and the second t2,t3
//   Tripod4     branch point joined to t0, t1, t2, plus the edge t2-t3
//   Path4       t0-t1-t2-t3
//   Cross4      star centred at t0 with leaves t1, t2, t3
enum class SteinerType { Seg2, Path3, Tripod3, FullSteiner4, Tripod4, Path4, Cross4 };

std::string to_string(SteinerType type);
int terminal_count(SteinerType type);
int branch_count(SteinerType type);
std::array<SteinerType, 7> all_steiner_types();

struct SteinerTopology {
    SteinerType type = SteinerType::Seg2;
    // Permutation of the input terminals; empty means identity.
    std::vector<std::size_t> order;
};

struct FermatResult {
    EmbeddedNetwork tree;
    std::optional<Point> steiner_point;
};

// Steiner tree of three points: the Torricelli point when every angle of the
// triangle is below 2pi/3, otherwise the two sides at the wide vertex.
FermatResult fermat_point(Point p1, Point p2, Point p3);

// Locally minimal realization of the given type. Vertices 0..n-1 of the result
// are the terminals in input order; branch points follow.
EmbeddedNetwork local_min_network(std::span<const Point> terminals, const SteinerTopology& topo);

// Shortest feasible type over every terminal order, or nullopt if none.
struct SteinerChoice {
    EmbeddedNetwork net;
    SteinerTopology topo;
    double length = 0.0;
};
std::optional<SteinerChoice> shortest_local_min_network(std::span<const Point> terminals);

struct AngleViolation {
    std::size_t vertex = 0;
    double angle = 0.0;
};

// Vertices where two incident pieces meet at an angle below 2pi/3 - tol.
// Degree-1 vertices are skipped. Arc pieces contribute their end tangents.
std::vector<AngleViolation> validate_angles(const EmbeddedNetwork& net, double tol = 1e-9);

}  // namespace mdm

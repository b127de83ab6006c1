// Strict-descent local search for short networks that cover M at distance r.
// Networks combine straight edges with arcs of M_r; every accepted feasible
// state is certified with the exact coverage predicate.
#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdm/horseshoe.hpp"

namespace mdm {

class InputNotLocallyMinimal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MoveKind {
    VertexShift,
    AttachedShift,
    SplitEdge,
    Shortcut,
    InsertBranch,
    Wrap,
    TangentReattach,
    EndRefit,
    LeafRefit,
    TipTrade,
    OpenLoop,
    DeleteRedundant,
};
inline constexpr std::size_t kMoveKinds = 12;
std::string to_string(MoveKind kind);

// Groups of moves that may be switched off.
struct MoveSet {
    bool vertex_shift = true;     // VertexShift, AttachedShift
    bool split_edge = true;       // SplitEdge
    bool merge_collinear = true;  // Shortcut
    bool insert_branch = true;    // InsertBranch
    bool snap_to_arc = true;      // Wrap, TangentReattach, OpenLoop
    bool delete_redundant = true; // DeleteRedundant, EndRefit, LeafRefit, TipTrade
    bool enabled(MoveKind kind) const;
};

struct SearchState {
    EmbeddedNetwork net;               // arcs live on M_r
    std::vector<bool> free_vertex_mask;  // false pins a vertex
    double penalty_weight = 10.0;
    std::uint64_t rng_seed = 0;
    EmbeddedNetwork best_feasible;
    double best_length = 0.0;  // +infinity until a feasible state is seen
    bool feasible = false;
    bool certified = false;  // a full deterministic move scan found no improvement
    long moves = 0;
    long accepted = 0;
    std::array<long, kMoveKinds> accepted_by_kind{};
    double shift_scale = 0.0;
    std::mt19937_64 rng;
};

// Attaches the network to M_r, normalizes it and evaluates feasibility.
SearchState make_search_state(EmbeddedNetwork net, const ConvexCurve& M, double r, std::uint64_t seed);

// Runs up to `iterations` move attempts. Stops early once certified.
SearchState improve(SearchState state, const ConvexCurve& M, double r, long iterations, const MoveSet& moves = {});

// Deterministic scan of every move at fixed scales. Returns true when no move
// shortens the feasible network by more than tol; otherwise writes the first
// improvement found into *improved when given.
bool certify_local_min(const EmbeddedNetwork& net, const ConvexCurve& M, double r, double tol = 1e-9,
                       EmbeddedNetwork* improved = nullptr);

// ---- seeds ------------------------------------------------------------------

struct Seed {
    std::string id;
    EmbeddedNetwork net;
};

// Horseshoe with random centre and sides, optionally lengthened tips.
EmbeddedNetwork seed_perturbed_horseshoe(const ConvexCurve& M, double r, std::mt19937_64& rng);
// Full M_r loop starting at a random point.
EmbeddedNetwork seed_inner_loop(const ConvexCurve& M, double r, std::mt19937_64& rng);
// Polygon around M_r with every edge outside Int(N_r).
EmbeddedNetwork seed_polygon(const ConvexCurve& M, double r, std::mt19937_64& rng);
// Polygon with the edge nearest a random point of M replaced by two tips.
EmbeddedNetwork seed_open_polygon(const ConvexCurve& M, double r, std::mt19937_64& rng);
// A chord of M_r with two tangent segments at each end.
EmbeddedNetwork seed_chord_tangents(const ConvexCurve& M, double r, std::mt19937_64& rng);

// Mixture of the generators above; only feasible seeds are returned.
std::vector<Seed> random_feasible_seeds(const ConvexCurve& M, double r, int count, std::uint64_t rng_seed);

// Seeds named by family: "horseshoe", "loop", "polygon", "open_polygon",
// "chord_tangents", "tripod_chain" (stadium only), "optimal_horseshoe".
std::vector<Seed> seeds_by_family(const ConvexCurve& M, double r, const std::vector<std::string>& families,
                                  int per_family, std::uint64_t rng_seed);

struct SearchResult {
    std::string seed_id;
    EmbeddedNetwork net;
    double initial_length = 0.0;
    double final_length = 0.0;
    bool feasible = false;
    bool certified = false;
    StructureReport verdict;
    long moves = 0;
    double wall_time = 0.0;
};

// Runs improve on every seed (budget moves each) and ranks by final length,
// infeasible results last.
std::vector<SearchResult> search_minimizer(const ConvexCurve& M, double r, const std::vector<Seed>& seeds, long budget,
                                           std::uint64_t rng_seed, const MoveSet& moves = {});

// length(net) - length(optimal_horseshoe) for a certified local minimum that
// is not a horseshoe.
double local_gap_check(const ConvexCurve& M, double r, const EmbeddedNetwork& net);

}  // namespace mdm

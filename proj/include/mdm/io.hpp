// Curve specs, JSON for curves and networks, results CSV, run manifests,
// scenario files and SVG drawings.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdm/optimizer.hpp"

namespace mdm {

// Malformed input; the message names the field or line at fault.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// "circle:R=5[,cx=0,cy=0]", "stadium:t=39.2[,cap=1,x=0,y=0]",
// "polygon:rho=0.5;0,0;4,0;5,3".
ConvexCurve parse_curve(const std::string& spec);
std::string curve_spec(const ConvexCurve& M);

nlohmann::json curve_to_json(const ConvexCurve& M);
ConvexCurve curve_from_json(const nlohmann::json& j);

// {"vertices": [[x, y], ...], "edges": [[i, j], ...],
//  "mr_arcs": [{"s0": .., "s1": .., "v0": i, "v1": j}, ...]}
// Arcs run clockwise from s0 to s1 on M_r, which is rebuilt from M and r on
// reading. v0 and v1 are optional on input.
nlohmann::json network_to_json(const EmbeddedNetwork& net);
EmbeddedNetwork network_from_json(const nlohmann::json& j, const ConvexCurve& M, double r);

// ---- results CSV ------------------------------------------------------------

inline constexpr const char* kCsvVersion = "mdm_csv_v1";

struct CsvRow {
    std::string seed_id;
    double final_length = 0.0;
    bool feasible = false;
    std::string structure_verdict;  // "horseshoe", "other" or "infeasible"
    double wall_time = 0.0;
};

std::string structure_verdict(const SearchResult& res);
CsvRow csv_row(const SearchResult& res, bool record_time);
// Version line, column header, then one row per entry. Lengths are written
// with 17 significant digits so they read back bit-identical.
void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);
std::vector<CsvRow> read_csv(std::istream& in);

// ---- run manifest -----------------------------------------------------------

struct RunManifest {
    std::string curve;  // curve spec
    double r = 0.0;
    std::vector<std::string> families;  // empty means random feasible starts
    int seeds = 0;                      // per family, or total random starts
    long budget = 0;
    std::uint64_t rng_seed = 0;
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

// ---- scenarios --------------------------------------------------------------

struct Scenario {
    std::string command;  // horseshoe, stadium, steiner, verify, optimize, turning
    std::optional<std::string> curve;
    double r = 0.0;
    std::uint64_t rng_seed = 0;
    nlohmann::json params = nlohmann::json::object();
    std::optional<std::string> csv;
    std::optional<std::string> svg;
    std::optional<std::string> network;  // output path for the resulting network
};

// Parses and validates. Syntax errors report the line and column; schema
// errors report the field.
Scenario parse_scenario(const std::string& text);

// ---- drawing ----------------------------------------------------------------

// M in green, M_r dotted black, the network in red, dashed balls of radius r
// around witness points.
void write_svg(std::ostream& out, const ConvexCurve& M, double r, const EmbeddedNetwork& net,
               std::span<const Point> witnesses = {});

}  // namespace mdm

// mdm: batch front-end. Each run prints one JSON line on stdout and writes the
// requested CSV, SVG and network files.
// Exit status: 0 success, 2 infeasible construction, 3 validation error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mdm/analysis.hpp"
#include "mdm/io.hpp"
#include "mdm/steiner.hpp"

using namespace mdm;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 2;
constexpr int kInvalid = 3;

// Construction failed for a valid scenario.
class InfeasibleRun : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    bool record_time = false;
    std::optional<std::string> manifest;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename F>
void write_file(const std::optional<std::string>& path, F&& emit) {
    if (!path) return;
    std::ofstream out(*path);
    if (!out) throw ScenarioError(*path + ": cannot write");
    emit(out);
}

void write_rows(const Scenario& s, const std::vector<CsvRow>& rows) {
    write_file(s.csv, [&](std::ostream& out) { write_csv(out, rows); });
}

void write_network(const Scenario& s, const EmbeddedNetwork& net) {
    write_file(s.network, [&](std::ostream& out) { out << network_to_json(net).dump(2) << "\n"; });
}

void draw(const Scenario& s, const ConvexCurve& M, double r, const EmbeddedNetwork& net,
          const std::vector<Point>& witnesses = {}) {
    write_file(s.svg, [&](std::ostream& out) { write_svg(out, M, r, net, witnesses); });
}

json gap_json(const HorseshoeGap& g) { return {{"center", g.center}, {"left", g.left}, {"right", g.right}}; }

EmbeddedNetwork load_network(const std::string& path, const ConvexCurve& M, double r) {
    const auto text = read_file(path);
    try {
        return network_from_json(json::parse(text), M, r);
    } catch (const json::parse_error& e) {
        throw ScenarioError(path + ": " + e.what());
    }
}

json run_horseshoe(const Scenario& s) {
    const auto M = parse_curve(*s.curve);
    const auto search = search_horseshoes(M, s.r);
    const auto net = horseshoe_network(M, search.best);
    const auto rep = verify_horseshoe_structure(net, M, s.r);
    const double len = length(net);
    write_rows(s, {{"optimal_horseshoe", len, rep.coverage_excess <= 1e-9, rep.passed ? "horseshoe" : "other", 0.0}});
    write_network(s, net);
    std::vector<Point> witnesses;
    bool tips_energetic = true;
    for (Point tip : {search.best.tip_left, search.best.tip_right}) {
        const auto pc = classify_point(net, M, s.r, tip);
        tips_energetic = tips_energetic && pc.energetic();
        if (pc.witness) witnesses.push_back(pc.witness->point);
    }
    draw(s, M, s.r, net, witnesses);
    return {{"length", len},
            {"tips_energetic", tips_energetic},
            {"gap", gap_json(search.best.gap)},
            {"within_theorem_regime", search.best.within_theorem_regime},
            {"structure_passed", rep.passed},
            {"local_minima", search.local_minima.size()}};
}

json run_stadium(const Scenario& s) {
    const double t = s.params.at("t").get<double>();
    const auto M = ConvexCurve::stadium(t, 1.0);
    EmbeddedNetwork comp;
    try {
        comp = stadium_competitor(t, s.r);
    } catch (const GridMismatch& e) {
        throw InfeasibleRun(e.what());
    }
    const auto h = optimal_horseshoe(M, s.r);
    const auto hnet = horseshoe_network(M, h);
    const int n = default_samples(100000);
    const auto ec = energy_report(comp, M, n), eh = energy_report(hnet, M, n);
    const bool comp_ok = ec.value <= s.r + ec.slack, h_ok = eh.value <= s.r + eh.slack;
    const double lc = length(comp), lh = length(hnet);
    write_rows(s, {{"stadium_competitor", lc, comp_ok, "other", 0.0},
                   {"optimal_horseshoe", lh, h_ok, verify_horseshoe_structure(hnet, M, s.r).passed ? "horseshoe" : "other",
                    0.0}});
    write_network(s, comp);
    draw(s, M, s.r, comp);
    return {{"t", t},
            {"competitor_length", lc},
            {"horseshoe_length", lh},
            {"margin", lh - lc},
            {"competitor_shorter", lc < lh},
            {"competitor_covers", comp_ok},
            {"horseshoe_covers", h_ok},
            {"samples", n}};
}

json run_steiner(const Scenario& s) {
    std::vector<Point> pts;
    for (const auto& p : s.params.at("points")) pts.push_back({p[0].get<double>(), p[1].get<double>()});
    std::vector<CsvRow> rows;
    json table = json::array();
    std::optional<EmbeddedNetwork> best;
    double best_len = INFINITY;
    auto record = [&](const std::string& name, const std::optional<EmbeddedNetwork>& net) {
        const double len = net ? length(*net) : 0.0;
        rows.push_back({name, len, net.has_value(), net ? "local_min" : "infeasible", 0.0});
        table.push_back({{"type", name}, {"feasible", net.has_value()}, {"length", net ? json(len) : json(nullptr)}});
        if (net && len < best_len) {
            best_len = len;
            best = net;
        }
    };
    if (s.params.value("all_topologies", false)) {
        for (auto type : all_steiner_types()) {
            std::optional<EmbeddedNetwork> net;
            try {
                net = local_min_network(pts, {type, {}});
            } catch (const Infeasible&) {
            } catch (const std::invalid_argument&) {
            }
            record(to_string(type), net);
        }
    } else {
        const auto choice = shortest_local_min_network(pts);
        record(choice ? to_string(choice->topo.type) : "none",
               choice ? std::optional<EmbeddedNetwork>(choice->net) : std::nullopt);
    }
    write_rows(s, rows);
    if (best) write_network(s, *best);
    if (!best) throw InfeasibleRun("no locally minimal network for these terminals");
    return {{"rows", table}, {"best_length", best_len}};
}

json run_verify(const Scenario& s) {
    const auto M = parse_curve(*s.curve);
    const auto net = load_network(s.params.at("network").get<std::string>(), M, s.r);
    const int n = default_samples(10000);
    const auto e = energy_report(net, M, n);
    const bool exact = !net.empty() && covers_exactly(primitives(net), M, s.r);
    const auto rep = verify_horseshoe_structure(net, M, s.r);
    const auto problems = validate_network(net);
    draw(s, M, s.r, net);
    write_rows(s, {{"input", length(net), exact, !exact ? "infeasible" : rep.passed ? "horseshoe" : "other", 0.0}});
    json out{{"length", length(net)},
             {"energy", e.value},
             {"slack", e.slack},
             {"samples", n},
             {"covers", exact},
             {"connected", is_connected(net)},
             {"has_loop", has_loop(net)},
             {"horseshoe", rep.passed},
             {"structure_failures", rep.failures},
             {"network_problems", problems}};
    if (!exact) throw InfeasibleRun(out.dump());
    return out;
}

json run_optimize(const Scenario& s, const Options& opt) {
    const auto M = parse_curve(*s.curve);
    const int count = s.params.at("seeds").get<int>();
    const long budget = s.params.at("budget").get<long>();
    const auto families = s.params.value("families", std::vector<std::string>{});
    const auto seeds =
        families.empty() ? random_feasible_seeds(M, s.r, count, s.rng_seed) : seeds_by_family(M, s.r, families, count, s.rng_seed);
    if (seeds.empty()) throw InfeasibleRun("no seeds could be built");
    const auto res = search_minimizer(M, s.r, seeds, budget, s.rng_seed);
    std::vector<CsvRow> rows;
    int horseshoes = 0, feasible = 0;
    for (const auto& x : res) {
        rows.push_back(csv_row(x, opt.record_time));
        horseshoes += x.feasible && x.verdict.passed;
        feasible += x.feasible;
    }
    write_rows(s, rows);
    write_file(opt.manifest, [&](std::ostream& out) {
        out << manifest_to_json({*s.curve, s.r, families, count, budget, s.rng_seed}).dump(2) << "\n";
    });
    const auto& best = res.front();
    write_network(s, best.net);
    draw(s, M, s.r, best.net);
    if (!best.feasible) throw InfeasibleRun("no run reached a feasible network");
    return {{"runs", res.size()},
            {"feasible", feasible},
            {"horseshoes", horseshoes},
            {"best_seed", best.seed_id},
            {"best_length", best.final_length},
            {"best_verdict", structure_verdict(best)},
            {"horseshoe_length", optimal_horseshoe(M, s.r).length()}};
}

json run_turning(const Scenario& s) {
    const auto M = parse_curve(*s.curve);
    const auto net = s.params.contains("network")
                         ? load_network(s.params.at("network").get<std::string>(), M, s.r)
                         : horseshoe_network(M, optimal_horseshoe(M, s.r));
    TurningDecomposition td;
    try {
        td = turning_decomposition(net, M, s.r);
    } catch (const std::runtime_error& e) {
        throw InfeasibleRun(e.what());
    }
    json nodes = json::array();
    for (const auto& n : td.nodes)
        nodes.push_back({{"node", n.node},
                         {"kind", n.kind == GraphNode::Kind::Arc ? "arc" : "component"},
                         {"turn_S", n.turn_S},
                         {"turn_q", n.turn_q},
                         {"rhs", n.rhs},
                         {"margin", n.margin}});
    draw(s, M, s.r, net);
    return {{"total", td.total},
            {"total_from_parts", td.total_from_parts},
            {"inequalities_hold", td.inequalities_hold(1e-6)},
            {"min_margin", td.min_margin()},
            {"nodes", nodes}};
}

int run(const Scenario& s, const Options& opt) {
    json head{{"command", s.command}};
    if (s.curve) head["curve"] = *s.curve;
    if (s.command != "steiner") head["r"] = s.r;
    auto finish = [&](const std::string& status, int code, const json& body) {
        json out = head;
        out["status"] = status;
        out["exit"] = code;
        if (body.is_object())
            for (const auto& [k, v] : body.items()) out[k] = v;
        std::cout << out.dump() << std::endl;
        return code;
    };
    try {
        json body;
        if (s.command == "horseshoe") body = run_horseshoe(s);
        else if (s.command == "stadium") body = run_stadium(s);
        else if (s.command == "steiner") body = run_steiner(s);
        else if (s.command == "verify") body = run_verify(s);
        else if (s.command == "optimize") body = run_optimize(s, opt);
        else body = run_turning(s);
        return finish("ok", kOk, body);
    } catch (const ScenarioError& e) {
        std::cerr << "mdm: " << e.what() << "\n";
        return finish("invalid", kInvalid, {{"message", e.what()}});
    } catch (const InfeasibleRun& e) {
        std::cerr << "mdm: infeasible: " << e.what() << "\n";
        const auto body = json::parse(e.what(), nullptr, false);
        return finish("infeasible", kInfeasible, body.is_object() ? body : json{{"message", e.what()}});
    } catch (const InfeasibleGap& e) {
        std::cerr << "mdm: infeasible: " << e.what() << "\n";
        return finish("infeasible", kInfeasible, {{"message", e.what()}});
    } catch (const std::invalid_argument& e) {
        std::cerr << "mdm: " << e.what() << "\n";
        return finish("invalid", kInvalid, {{"message", e.what()}});
    } catch (const std::domain_error& e) {
        std::cerr << "mdm: " << e.what() << "\n";
        return finish("invalid", kInvalid, {{"message", e.what()}});
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maximal distance minimizer experiments"};
    app.require_subcommand(1);
    Options opt;
    std::string curve, points_text, network_in, csv, svg, network_out, manifest, scenario_path, families_text;
    double r = 0.0, t = 0.0;
    std::uint64_t rng_seed = 0;
    int seeds = 10;
    long budget = 100000;
    bool all_topologies = false;
    std::vector<std::string> points;

    auto outputs = [&](CLI::App* sub) {
        sub->add_option("--csv", csv, "Results CSV path");
        sub->add_option("--svg", svg, "SVG drawing path");
        sub->add_option("--network-out", network_out, "Network JSON output path");
    };
    auto curve_r = [&](CLI::App* sub) {
        sub->add_option("--curve", curve, "circle:R=5 | stadium:t=6,cap=1 | polygon:rho=0.5;x,y;...")->required();
        sub->add_option("--r", r, "Coverage radius")->required();
    };

    auto* horseshoe = app.add_subcommand("horseshoe", "Shortest horseshoe on a curve");
    curve_r(horseshoe);
    outputs(horseshoe);

    auto* stadium = app.add_subcommand("stadium", "Tripod chain against the horseshoe on a stadium");
    stadium->add_option("--t", t, "Spine length")->required();
    stadium->add_option("--r", r, "Coverage radius")->required();
    outputs(stadium);

    auto* steiner = app.add_subcommand("steiner", "Locally minimal networks on 2 to 4 terminals");
    steiner->add_option("--points", points, "Terminals as x,y")->required()->expected(2, 4);
    steiner->add_flag("--all-topologies", all_topologies, "One row per combinatorial type");
    outputs(steiner);

    auto* verify = app.add_subcommand("verify", "Coverage and structure report for a network file");
    curve_r(verify);
    verify->add_option("--network", network_in, "Network JSON")->required();
    outputs(verify);

    auto* optimize = app.add_subcommand("optimize", "Multi-start local search");
    curve_r(optimize);
    optimize->add_option("--seeds", seeds, "Random starts, or starts per family")->check(CLI::PositiveNumber);
    optimize->add_option("--families", families_text, "Comma-separated seed families");
    optimize->add_option("--budget", budget, "Moves per start")->check(CLI::NonNegativeNumber);
    optimize->add_option("--rng-seed", rng_seed, "Random seed");
    optimize->add_option("--manifest", manifest, "Run manifest output path");
    optimize->add_flag("--record-time", opt.record_time, "Write wall times into the CSV");
    outputs(optimize);

    auto* turning = app.add_subcommand("turning", "Turning decomposition of a horseshoe or a network file");
    curve_r(turning);
    turning->add_option("--network", network_in, "Network JSON (default: the optimal horseshoe)");
    outputs(turning);

    auto* runner = app.add_subcommand("run", "Run a scenario file");
    runner->add_option("scenario", scenario_path, "Scenario JSON")->required();
    runner->add_option("--manifest", manifest, "Run manifest output path");
    runner->add_flag("--record-time", opt.record_time, "Write wall times into the CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cout << json{{"status", "invalid"}, {"exit", kInvalid}, {"message", e.what()}}.dump() << std::endl;
        return kInvalid;
    }
    if (!manifest.empty()) opt.manifest = manifest;

    // Every subcommand becomes a scenario so both entry points validate alike.
    json j;
    try {
        if (runner->parsed()) {
            const auto s = parse_scenario(read_file(scenario_path));
            return run(s, opt);
        }
        const auto* sub = app.get_subcommands().front();
        j["command"] = sub->get_name();
        json params = json::object();
        if (sub != steiner) j["r"] = r;
        if (sub != steiner && sub != stadium) j["curve"] = curve;
        if (sub == stadium) params["t"] = t;
        if (sub == steiner) {
            json pts = json::array();
            for (const auto& p : points) {
                const auto comma = p.find(',');
                if (comma == std::string::npos) throw ScenarioError("points: expected x,y, got '" + p + "'");
                try {
                    pts.push_back({std::stod(p.substr(0, comma)), std::stod(p.substr(comma + 1))});
                } catch (const std::exception&) {
                    throw ScenarioError("points: expected x,y, got '" + p + "'");
                }
            }
            params["points"] = pts;
            params["all_topologies"] = all_topologies;
        }
        if (!network_in.empty()) params["network"] = network_in;
        if (sub == optimize) {
            params["seeds"] = seeds;
            params["budget"] = budget;
            j["rng_seed"] = rng_seed;
            if (!families_text.empty()) {
                json f = json::array();
                std::stringstream ss(families_text);
                for (std::string item; std::getline(ss, item, ',');) f.push_back(item);
                params["families"] = f;
            }
        }
        j["params"] = params;
        json out = json::object();
        if (!csv.empty()) out["csv"] = csv;
        if (!svg.empty()) out["svg"] = svg;
        if (!network_out.empty()) out["network"] = network_out;
        j["outputs"] = out;
        return run(parse_scenario(j.dump()), opt);
    } catch (const ScenarioError& e) {
        std::cerr << "mdm: " << e.what() << "\n";
        std::cout << json{{"status", "invalid"}, {"exit", kInvalid}, {"message", e.what()}}.dump() << std::endl;
        return kInvalid;
    }
}

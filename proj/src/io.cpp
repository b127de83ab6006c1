#include "mdm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace mdm {

using nlohmann::json;

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_num(const std::string& text, const std::string& field) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v))
        throw ScenarioError(field + ": '" + text + "' is not a finite number");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

template <typename F>
ConvexCurve build_curve(const std::string& field, F&& make) {
    try {
        return make();
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(field + ": " + e.what());
    }
}

const json& require(const json& j, const std::string& key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw ScenarioError(where + key + ": missing");
    return j.at(key);
}

double get_number(const json& j, const std::string& key, const std::string& where) {
    const auto& v = require(j, key, where);
    if (!v.is_number()) throw ScenarioError(where + key + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(where + key + ": expected a finite number");
    return d;
}

std::size_t get_index(const json& v, std::size_t bound, const std::string& field) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ScenarioError(field + ": expected a non-negative integer");
    const auto i = v.get<std::size_t>();
    if (i >= bound) throw ScenarioError(field + ": index " + std::to_string(i) + " out of range");
    return i;
}

Point get_point(const json& v, const std::string& field) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ScenarioError(field + ": expected [x, y]");
    const Point p{v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ScenarioError(field + ": expected finite coordinates");
    return p;
}

}  // namespace

// ---- curves -----------------------------------------------------------------

ConvexCurve parse_curve(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ScenarioError("curve: expected kind:params, got '" + spec + "'");
    const std::string kind = spec.substr(0, colon), body = spec.substr(colon + 1);
    if (kind == "circle" || kind == "stadium") {
        std::vector<std::pair<std::string, double>> kv;
        for (const auto& item : split(body, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw ScenarioError("curve: expected key=value, got '" + item + "'");
            const std::string key = item.substr(0, eq);
            kv.emplace_back(key, parse_num(item.substr(eq + 1), "curve." + key));
        }
        auto take = [&](const std::string& key, std::optional<double> fallback) {
            const auto it = std::find_if(kv.begin(), kv.end(), [&](const auto& p) { return p.first == key; });
            if (it == kv.end()) {
                if (!fallback) throw ScenarioError("curve." + key + ": missing");
                return *fallback;
            }
            const double v = it->second;
            kv.erase(it);
            return v;
        };
        ConvexCurve out = build_curve("curve", [&] {
            if (kind == "circle") {
                const double R = take("R", std::nullopt);
                const Point c{take("cx", 0.0), take("cy", 0.0)};
                return ConvexCurve::circle(c, R);
            }
            const double t = take("t", std::nullopt);
            const double cap = take("cap", 1.0);
            const Point o{take("x", 0.0), take("y", 0.0)};
            return ConvexCurve::stadium(t, cap, o);
        });
        if (!kv.empty()) throw ScenarioError("curve." + kv.front().first + ": unknown key for " + kind);
        return out;
    }
    if (kind == "polygon") {
        const auto parts = split(body, ';');
        if (parts.empty() || parts.front().rfind("rho=", 0) != 0)
            throw ScenarioError("curve.rho: polygon spec must start with rho=");
        const double rho = parse_num(parts.front().substr(4), "curve.rho");
        std::vector<Point> pts;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            const auto xy = split(parts[i], ',');
            const std::string field = "curve.vertex[" + std::to_string(i - 1) + "]";
            if (xy.size() != 2) throw ScenarioError(field + ": expected x,y");
            pts.push_back({parse_num(xy[0], field), parse_num(xy[1], field)});
        }
        return build_curve("curve", [&] { return ConvexCurve::smoothed_polygon(pts, rho); });
    }
    throw ScenarioError("curve: unknown kind '" + kind + "' (circle, stadium, polygon)");
}

std::string curve_spec(const ConvexCurve& M) {
    switch (M.kind()) {
        case CurveKind::Circle: {
            std::string s = "circle:R=" + num(M.circle_radius());
            const Point c = M.circle_center();
            if (c.x != 0.0 || c.y != 0.0) s += ",cx=" + num(c.x) + ",cy=" + num(c.y);
            return s;
        }
        case CurveKind::Stadium: {
            std::string s = "stadium:t=" + num(M.spine_length()) + ",cap=" + num(M.min_curvature_radius());
            const Point o = M.spine_origin();
            if (o.x != 0.0 || o.y != 0.0) s += ",x=" + num(o.x) + ",y=" + num(o.y);
            return s;
        }
        case CurveKind::SmoothedPolygon: {
            std::string s = "polygon:rho=" + num(M.min_curvature_radius());
            for (const Point& p : M.outer_vertices()) s += ";" + num(p.x) + "," + num(p.y);
            return s;
        }
    }
    return {};
}

json curve_to_json(const ConvexCurve& M) {
    switch (M.kind()) {
        case CurveKind::Circle:
            return {{"kind", "circle"},
                    {"center", {M.circle_center().x, M.circle_center().y}},
                    {"radius", M.circle_radius()}};
        case CurveKind::Stadium:
            return {{"kind", "stadium"},
                    {"origin", {M.spine_origin().x, M.spine_origin().y}},
                    {"spine_length", M.spine_length()},
                    {"cap_radius", M.min_curvature_radius()}};
        case CurveKind::SmoothedPolygon: {
            json pts = json::array();
            for (const Point& p : M.outer_vertices()) pts.push_back({p.x, p.y});
            return {{"kind", "polygon"}, {"vertices", pts}, {"corner_radius", M.min_curvature_radius()}};
        }
    }
    return {};
}

ConvexCurve curve_from_json(const json& j) {
    if (j.is_string()) return parse_curve(j.get<std::string>());
    const auto& kind = require(j, "kind", "curve.");
    if (!kind.is_string()) throw ScenarioError("curve.kind: expected a string");
    const auto k = kind.get<std::string>();
    if (k == "circle") {
        const Point c = j.contains("center") ? get_point(j.at("center"), "curve.center") : Point{};
        const double R = get_number(j, "radius", "curve.");
        return build_curve("curve", [&] { return ConvexCurve::circle(c, R); });
    }
    if (k == "stadium") {
        const Point o = j.contains("origin") ? get_point(j.at("origin"), "curve.origin") : Point{};
        const double t = get_number(j, "spine_length", "curve.");
        const double cap = j.contains("cap_radius") ? get_number(j, "cap_radius", "curve.") : 1.0;
        return build_curve("curve", [&] { return ConvexCurve::stadium(t, cap, o); });
    }
    if (k == "polygon") {
        const auto& v = require(j, "vertices", "curve.");
        if (!v.is_array()) throw ScenarioError("curve.vertices: expected an array");
        std::vector<Point> pts;
        for (std::size_t i = 0; i < v.size(); ++i)
            pts.push_back(get_point(v[i], "curve.vertices[" + std::to_string(i) + "]"));
        const double rho = get_number(j, "corner_radius", "curve.");
        return build_curve("curve", [&] { return ConvexCurve::smoothed_polygon(pts, rho); });
    }
    throw ScenarioError("curve.kind: unknown kind '" + k + "'");
}

// ---- networks ---------------------------------------------------------------

json network_to_json(const EmbeddedNetwork& net) {
    json v = json::array(), e = json::array(), a = json::array();
    for (const Point& p : net.vertices) v.push_back({p.x, p.y});
    for (const Edge& ed : net.edges) e.push_back({ed.a, ed.b});
    for (const MrArc& arc : net.mr_arcs)
        a.push_back({{"s0", arc.arc.s_start}, {"s1", arc.arc.s_end()}, {"v0", arc.v0}, {"v1", arc.v1}});
    return {{"vertices", v}, {"edges", e}, {"mr_arcs", a}};
}

EmbeddedNetwork network_from_json(const json& j, const ConvexCurve& M, double r) {
    EmbeddedNetwork net;
    const auto& v = require(j, "vertices", "network.");
    if (!v.is_array()) throw ScenarioError("network.vertices: expected an array");
    for (std::size_t i = 0; i < v.size(); ++i)
        net.add_vertex(get_point(v[i], "network.vertices[" + std::to_string(i) + "]"));
    const std::size_t n = net.vertices.size();
    if (j.contains("edges")) {
        const auto& e = j.at("edges");
        if (!e.is_array()) throw ScenarioError("network.edges: expected an array");
        for (std::size_t i = 0; i < e.size(); ++i) {
            const std::string field = "network.edges[" + std::to_string(i) + "]";
            if (!e[i].is_array() || e[i].size() != 2) throw ScenarioError(field + ": expected [a, b]");
            net.add_edge(get_index(e[i][0], n, field), get_index(e[i][1], n, field));
        }
    }
    if (j.contains("mr_arcs")) {
        const auto& a = j.at("mr_arcs");
        if (!a.is_array()) throw ScenarioError("network.mr_arcs: expected an array");
        if (!a.empty()) {
            try {
                net.arc_curve = std::make_shared<const ConvexCurve>(M.offset_inward(r));
            } catch (const std::exception& e) {
                throw ScenarioError(std::string("network.mr_arcs: no inner curve: ") + e.what());
            }
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string field = "network.mr_arcs[" + std::to_string(i) + "].";
            MrArc arc;
            const double s0 = get_number(a[i], "s0", field), s1 = get_number(a[i], "s1", field);
            if (s1 < s0) throw ScenarioError(field + "s1: must not be below s0 (arcs run clockwise)");
            arc.arc = {s0, s1 - s0};
            // Ends default to the vertex at the arc end, added when missing.
            auto end = [&](const char* key, double s) {
                if (a[i].contains(key)) return get_index(a[i].at(key), net.vertices.size(), field + key);
                const Point p = net.arc_curve->point(s);
                for (std::size_t v = 0; v < net.vertices.size(); ++v)
                    if (dist(net.vertices[v], p) <= 1e-9 * M.min_curvature_radius()) return v;
                return net.add_vertex(p);
            };
            arc.v0 = end("v0", s0);
            arc.v1 = end("v1", s1);
            net.mr_arcs.push_back(arc);
        }
    }
    return net;
}

// ---- results CSV ------------------------------------------------------------

std::string structure_verdict(const SearchResult& res) {
    if (!res.feasible) return "infeasible";
    return res.verdict.passed ? "horseshoe" : "other";
}

CsvRow csv_row(const SearchResult& res, bool record_time) {
    return {res.seed_id, res.final_length, res.feasible, structure_verdict(res), record_time ? res.wall_time : 0.0};
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
    out << kCsvVersion << "\n";
    out << "seed_id,final_length,feasible,structure_verdict,wall_time\n";
    char buf[64];
    for (const auto& row : rows) {
        if (row.seed_id.find_first_of(",\n\"") != std::string::npos)
            throw std::invalid_argument("csv: seed id contains a separator: " + row.seed_id);
        std::snprintf(buf, sizeof buf, "%.17g", row.final_length);
        out << row.seed_id << ',' << buf << ',' << (row.feasible ? 1 : 0) << ',' << row.structure_verdict << ','
            << num(row.wall_time) << "\n";
    }
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvVersion)
        throw ScenarioError("csv line 1: expected version tag " + std::string(kCsvVersion));
    if (!std::getline(in, line) || line != "seed_id,final_length,feasible,structure_verdict,wall_time")
        throw ScenarioError("csv line 2: unexpected column header");
    std::vector<CsvRow> rows;
    for (int no = 3; std::getline(in, line); ++no) {
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        const std::string where = "csv line " + std::to_string(no);
        if (cells.size() != 5) throw ScenarioError(where + ": expected 5 columns");
        if (cells[2] != "0" && cells[2] != "1") throw ScenarioError(where + ": feasible must be 0 or 1");
        rows.push_back({cells[0], parse_num(cells[1], where), cells[2] == "1", cells[3], parse_num(cells[4], where)});
    }
    return rows;
}

// ---- run manifest -----------------------------------------------------------

json manifest_to_json(const RunManifest& m) {
    return {{"curve", m.curve}, {"r", m.r},           {"families", m.families},
            {"seeds", m.seeds}, {"budget", m.budget}, {"rng_seed", m.rng_seed}};
}

RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    try {
        m.curve = j.at("curve").get<std::string>();
        m.r = j.at("r").get<double>();
        m.families = j.value("families", std::vector<std::string>{});
        m.seeds = j.at("seeds").get<int>();
        m.budget = j.at("budget").get<long>();
        m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("manifest: ") + e.what());
    }
    return m;
}

// ---- scenarios --------------------------------------------------------------

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line and column.
        const std::size_t at = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(at), '\n');
        const auto nl = text.rfind('\n', at > 0 ? at - 1 : 0);
        const std::size_t col = nl == std::string::npos || at == 0 ? at + 1 : at - nl;
        throw ScenarioError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": syntax error");
    }
    if (!j.is_object()) throw ScenarioError("scenario: expected a JSON object");
    static const std::vector<std::string> known{"command", "curve", "r", "rng_seed", "params", "outputs"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end()) throw ScenarioError(key + ": unknown field");

    Scenario s;
    const auto& cmd = require(j, "command", "");
    if (!cmd.is_string()) throw ScenarioError("command: expected a string");
    s.command = cmd.get<std::string>();
    static const std::vector<std::string> commands{"horseshoe", "stadium", "steiner", "verify", "optimize", "turning"};
    if (std::find(commands.begin(), commands.end(), s.command) == commands.end())
        throw ScenarioError("command: unknown command '" + s.command + "'");

    if (j.contains("params")) {
        if (!j.at("params").is_object()) throw ScenarioError("params: expected an object");
        s.params = j.at("params");
    }
    if (j.contains("rng_seed")) {
        const auto& v = j.at("rng_seed");
        if (!v.is_number_unsigned()) throw ScenarioError("rng_seed: expected a non-negative integer");
        s.rng_seed = v.get<std::uint64_t>();
    }
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        if (!o.is_object()) throw ScenarioError("outputs: expected an object");
        for (const auto& [key, v] : o.items()) {
            if (!v.is_string()) throw ScenarioError("outputs." + key + ": expected a path");
            if (key == "csv") s.csv = v.get<std::string>();
            else if (key == "svg") s.svg = v.get<std::string>();
            else if (key == "network") s.network = v.get<std::string>();
            else throw ScenarioError("outputs." + key + ": unknown output");
        }
    }

    const bool needs_curve = s.command != "stadium" && s.command != "steiner";
    if (j.contains("curve")) {
        const auto& c = j.at("curve");
        s.curve = c.is_string() ? c.get<std::string>() : curve_spec(curve_from_json(c));
        parse_curve(*s.curve);
    } else if (needs_curve) {
        throw ScenarioError("curve: missing");
    }
    if (s.command != "steiner") {
        s.r = get_number(j, "r", "");
        if (!(s.r > 0.0)) throw ScenarioError("r: must be positive");
    }

    const auto& p = s.params;
    auto positive_int = [&](const char* key, bool allow_zero) {
        const auto& v = require(p, key, "params.");
        if (!v.is_number_integer() || v.get<long long>() < (allow_zero ? 0 : 1))
            throw ScenarioError(std::string("params.") + key + ": expected a " +
                                (allow_zero ? "non-negative" : "positive") + " integer");
    };
    if (s.command == "stadium") {
        if (!(get_number(p, "t", "params.") > 0.0)) throw ScenarioError("params.t: must be positive");
    } else if (s.command == "steiner") {
        const auto& pts = require(p, "points", "params.");
        if (!pts.is_array() || pts.size() < 2 || pts.size() > 4)
            throw ScenarioError("params.points: expected 2 to 4 points");
        for (std::size_t i = 0; i < pts.size(); ++i) get_point(pts[i], "params.points[" + std::to_string(i) + "]");
    } else if (s.command == "verify") {
        if (!require(p, "network", "params.").is_string()) throw ScenarioError("params.network: expected a path");
    } else if (s.command == "optimize") {
        positive_int("seeds", false);
        positive_int("budget", true);
        if (p.contains("families")) {
            const auto& f = p.at("families");
            if (!f.is_array() || !std::all_of(f.begin(), f.end(), [](const json& x) { return x.is_string(); }))
                throw ScenarioError("params.families: expected an array of names");
        }
    }
    return s;
}

// ---- drawing ----------------------------------------------------------------

namespace {

struct Frame {
    double x0, y1, scale;
    std::string pt(Point p) const { return num((p.x - x0) * scale) + "," + num((y1 - p.y) * scale); }
};

// SVG path data for a chain of primitives; y is flipped, so a counterclockwise
// arc in the plane is drawn with sweep flag 0.
std::string path_data(const std::vector<Primitive>& prims, const Frame& f) {
    std::string d;
    for (const auto& prim : prims) {
        if (const auto* s = std::get_if<Segment>(&prim)) {
            d += "M" + f.pt(s->a) + " L" + f.pt(s->b) + " ";
            continue;
        }
        const auto& a = std::get<CircularArc>(prim);
        const double sweep = a.signed_sweep();
        const int pieces = std::abs(sweep) > kPi ? 2 : 1;
        const std::string rad = num(a.radius * f.scale);
        d += "M" + f.pt(a.start()) + " ";
        for (int k = 1; k <= pieces; ++k) {
            const Point end = a.center + polar(a.start_angle + sweep * k / pieces, a.radius);
            d += "A" + rad + "," + rad + " 0 0," + (sweep > 0 ? "0" : "1") + " " + f.pt(end) + " ";
        }
    }
    if (!d.empty()) d.pop_back();
    return d;
}

}  // namespace

void write_svg(std::ostream& out, const ConvexCurve& M, double r, const EmbeddedNetwork& net,
               std::span<const Point> witnesses) {
    const auto outer = M.as_primitives();
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    const double L = M.arc_length();
    for (int i = 0; i < 512; ++i) {
        const Point p = M.point(L * i / 512);
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    for (const Point& p : net.vertices) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    const double pad = 0.05 * std::max(x1 - x0, y1 - y0);
    x0 -= pad;
    x1 += pad;
    y0 -= pad;
    y1 += pad;
    const double scale = 800.0 / std::max(x1 - x0, y1 - y0);
    const Frame f{x0, y1, scale};
    const double stroke = 2.0;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num((x1 - x0) * scale) << "\" height=\""
        << num((y1 - y0) * scale) << "\">\n";
    out << "  <path d=\"" << path_data(outer, f) << "\" fill=\"none\" stroke=\"green\" stroke-width=\"" << stroke
        << "\"/>\n";
    if (r > 0.0 && r < M.min_curvature_radius())
        out << "  <path d=\"" << path_data(M.offset_inward(r).as_primitives(), f)
            << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\" stroke-dasharray=\"2,4\"/>\n";
    if (!net.empty())
        out << "  <path d=\"" << path_data(primitives(net), f) << "\" fill=\"none\" stroke=\"red\" stroke-width=\""
            << stroke << "\" stroke-linecap=\"round\"/>\n";
    for (const Point& w : witnesses) {
        const std::string c = f.pt(w);
        const auto at = c.find(',');
        out << "  <circle cx=\"" << c.substr(0, at) << "\" cy=\"" << c.substr(at + 1) << "\" r=\"" << num(r * scale)
            << "\" fill=\"none\" stroke=\"gray\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace mdm

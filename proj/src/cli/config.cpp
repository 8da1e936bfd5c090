#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mvset/cli.hpp"
#include "mvset/error.hpp"

namespace mvset {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string where(const std::string& key, int line) {
    std::ostringstream os;
    os << "line " << line << ", key '" << key << "'";
    return os.str();
}

double to_real(const std::string& text, const std::string& ctx) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || *end != '\0' || !std::isfinite(v)) throw ConfigError(ctx + ": '" + t + "' is not a number");
    return v;
}

int to_int(const std::string& text, const std::string& ctx) {
    const std::string t = trim(text);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || *end != '\0') throw ConfigError(ctx + ": '" + t + "' is not an integer");
    return static_cast<int>(v);
}

bool to_bool(const std::string& text, const std::string& ctx) {
    const std::string t = trim(text);
    if (t == "true" || t == "yes" || t == "1") return true;
    if (t == "false" || t == "no" || t == "0") return false;
    throw ConfigError(ctx + ": '" + t + "' is not a boolean");
}

std::vector<double> to_reals(const std::string& text, const std::string& ctx) {
    std::vector<double> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) out.push_back(to_real(item, ctx));
    if (out.empty()) throw ConfigError(ctx + ": empty list");
    return out;
}

Point to_point(const std::string& text, const std::string& ctx) {
    const auto v = to_reals(text, ctx);
    if (v.size() != 2) throw ConfigError(ctx + ": expected two coordinates 'x, y'");
    return {v[0], v[1]};
}

// A single number stands for (a, a).
Point to_corner(const std::string& text, const std::string& ctx) {
    const auto v = to_reals(text, ctx);
    if (v.size() == 1) return {v[0], v[0]};
    if (v.size() == 2) return {v[0], v[1]};
    throw ConfigError(ctx + ": expected 'a' or 'x, y'");
}

std::vector<Point> to_points(const std::string& text, const std::string& ctx) {
    std::vector<Point> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ';'))
        if (!trim(item).empty()) out.push_back(to_point(item, ctx));
    return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"grid",
         {
             {"lo", [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.lo = to_corner(v, x); }},
             {"hi", [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.hi = to_corner(v, x); }},
             {"n_side", [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.n_side = to_int(v, x); }},
         }},
        {"operator",
         {
             {"scenario", [](ScenarioConfig& c, const std::string& v, const std::string&) { c.scenario = v; }},
             {"kind",
              [](ScenarioConfig& c, const std::string& v, const std::string& x) {
                  if (v != "coefficients" && v != "metric")
                      throw ConfigError(x + ": kind must be 'coefficients' or 'metric'");
                  c.kind = v;
              }},
             {"t11", [](ScenarioConfig& c, const std::string& v, const std::string&) { c.t11 = v; }},
             {"t12", [](ScenarioConfig& c, const std::string& v, const std::string&) { c.t12 = v; }},
             {"t22", [](ScenarioConfig& c, const std::string& v, const std::string&) { c.t22 = v; }},
         }},
        {"run",
         {
             {"center", [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.center = to_point(v, x); }},
             {"radii", [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.radii = to_reals(v, x); }},
             {"function", [](ScenarioConfig& c, const std::string& v, const std::string&) { c.function = v; }},
             {"subsolution",
              [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.subsolution = to_bool(v, x); }},
             {"radius", [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.radius = to_real(v, x); }},
             {"centers",
              [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.centers = to_points(v, x); }},
             {"data", [](ScenarioConfig& c, const std::string& v, const std::string&) { c.data = v; }},
             {"point", [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.point = to_point(v, x); }},
             {"nondegeneracy_steps",
              [](ScenarioConfig& c, const std::string& v, const std::string& x) {
                  c.nondegeneracy_steps = to_reals(v, x);
              }},
             {"shift_radii",
              [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.shift_radii = to_reals(v, x); }},
             {"tol_T", [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.tol_T = to_real(v, x); }},
             {"T_grid",
              [](ScenarioConfig& c, const std::string& v, const std::string& x) {
                  const auto t = to_reals(v, x);
                  if (t.size() != 3 || !(t[2] >= 2.0) || std::floor(t[2]) != t[2] || !(t[1] > t[0]))
                      throw ConfigError(x + ": expected 'lo, hi, count' with lo < hi and count >= 2");
                  c.T_lo = t[0];
                  c.T_hi = t[1];
                  c.T_count = static_cast<int>(t[2]);
              }},
             {"scan_radius",
              [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.scan_radius = to_real(v, x); }},
             {"lattice_nodes",
              [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.lattice_nodes = to_int(v, x); }},
             {"pgm", [](ScenarioConfig& c, const std::string& v, const std::string& x) { c.pgm = to_bool(v, x); }},
         }},
    };
    return table;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::string section;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!setters().count(section))
                throw ConfigError("line " + std::to_string(line) + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' appears before any section");
        const auto& keys = setters().at(section);
        const auto it = keys.find(key);
        if (it == keys.end())
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "' in [" + section + "]");
        if (!seen.insert(section + "." + key).second)
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'");
        if (value.empty()) throw ConfigError(where(key, line) + ": empty value");
        it->second(cfg, value, where(key, line));
    }
    if (cfg.inline_operator()) {
        if (seen.count("operator.scenario"))
            throw ConfigError("[operator]: give either 'scenario' or an inline tensor, not both");
        if (cfg.t11.empty() || cfg.t22.empty()) throw ConfigError("[operator]: inline tensor needs t11 and t22");
    } else if (seen.count("operator.t11") || seen.count("operator.t12") || seen.count("operator.t22")) {
        throw ConfigError("[operator]: inline tensor components need 'kind'");
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Scenario ScenarioConfig::operator_scenario() const {
    if (inline_operator())
        return inline_scenario(kind == "metric" ? Scenario::Kind::metric : Scenario::Kind::coefficients, t11, t12,
                               t22);
    return find_scenario(scenario);
}

Grid ScenarioConfig::grid() const {
    try {
        return make_grid(lo, hi, n_side);
    } catch (const Error& e) {
        throw ConfigError(std::string("[grid]: ") + e.what());
    }
}

std::string ScenarioConfig::data_expression() const {
    if (!data.empty()) return data;
    const Scenario s = operator_scenario();
    if (s.default_data.empty())
        throw ConfigError("scenario '" + s.name + "' has no default obstacle data; set [run] data");
    return s.default_data;
}

std::string config_help() {
    const ScenarioConfig d;
    std::ostringstream os;
    os << "usage: mvset <subcommand> --config <file> [--out <dir>]\n\n"
          "subcommands:\n"
          "  green      Green's function of the operator with pole at [run] center\n"
          "  family     mean value sets for [run] radii: nesting, gaps, volumes, ball ratios\n"
          "  mvt        averages of [run] function over the family (mean value chain)\n"
          "  converse   mean value defect of [run] function at [run] centers, radius [run] radius\n"
          "  blowup     classical obstacle solve with [run] data, blow-up class at [run] point\n"
          "  singshift  shift search, decay and preservation at the origin for [run] data\n"
          "  scenarios  list the built-in operators\n\n"
          "config file: 'key = value' lines, '#' comments, sections [grid] [operator] [run]\n\n"
          "[grid]\n"
          "  lo = -1                 lower corner (a or x, y)\n"
          "  hi = 1                  upper corner (a or x, y); the box must be square\n"
          "  n_side = " << d.n_side << "           nodes per side\n"
          "[operator]\n"
          "  scenario = laplace      built-in operator (see 'mvset scenarios')\n"
          "  kind = coefficients     or metric: inline tensor instead of a scenario\n"
          "  t11, t12 = 0, t22       tensor components as expressions in x and y\n"
          "[run]\n"
          "  center = 0, 0           pole x0 (snapped to the nearest node)\n"
          "  radii = 0.2, 0.3, 0.4   family radii, strictly increasing\n"
          "  function = x^2+y^2      test function for mvt and converse\n"
          "  subsolution = auto      mvt: check the increasing chain (default: L v >= 0 on the grid)\n"
          "  radius = 0.3            converse radius\n"
          "  centers =               converse sample centres 'x, y; x, y; ...' (default: x0)\n"
          "  data =                  obstacle boundary data (default: the scenario's)\n"
          "  point = 0, 0            blow-up point\n"
          "  nondegeneracy_steps = 8, 16, 32   nondegeneracy radii in grid steps\n"
          "  shift_radii = 0.8, 0.4, 0.2, 0.1  shift radii, strictly descending\n"
          "  tol_T = 1e-06           bisection tolerance in T\n"
          "  T_grid = -0.5, 0.5, 41  uniqueness scan: lo, hi, count\n"
          "  scan_radius = 0.4       uniqueness scan radius\n"
          "  lattice_nodes = 160     target nodes across a shift disc\n"
          "  pgm = true              write PGM snapshots\n\n"
          "exit codes: 0 ok, 2 config, 3 geometry or margin, 4 precondition, 5 solver\n";
    return os.str();
}

}  // namespace mvset

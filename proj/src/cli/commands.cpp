#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mvset/cli.hpp"
#include "mvset/error.hpp"
#include "mvset/expression.hpp"
#include "mvset/field_io.hpp"
#include "mvset/freeboundary.hpp"
#include "mvset/greens.hpp"
#include "mvset/mvs.hpp"
#include "mvset/obstacle.hpp"
#include "mvset/singshift.hpp"

namespace mvset {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

class Output {
public:
    explicit Output(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void text(const std::string& name, const std::string& content) const {
        std::ofstream out(path(name), std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + path(name) + "'");
        out << content;
    }

    void json(const std::string& name, const ordered_json& j) const { text(name, j.dump(2) + "\n"); }

private:
    fs::path dir_;
};

ScalarField field_of(const Grid& g, const std::string& expression) {
    const Expression e(expression);
    return ScalarField::from_function(g, [&](Point p) { return e(p); });
}

ordered_json point_json(Point p) { return ordered_json::array({p.x, p.y}); }

ordered_json classification_summary(const BlowupClassification& c) {
    ordered_json j;
    j["verdict"] = to_string(c.verdict);
    if (c.verdict == Verdict::regular) j["n0"] = point_json(c.normal);
    if (c.verdict == Verdict::singular) {
        j["M"] = {c.M.m11, c.M.m12, c.M.m22};
        j["eigenvalues"] = {c.eigenvalues[0], c.eigenvalues[1]};
        j["trace"] = c.M.trace();
        j["stratum"] = c.stratum;
        j["gamma_est"] = c.gamma;
    }
    ordered_json res = ordered_json::array();
    for (const auto& s : c.scales)
        res.push_back({{"rho", s.rho},
                       {"halfspace", s.halfspace_residual},
                       {"quadratic", s.quadratic_residual},
                       {"verdict", to_string(s.verdict)}});
    j["residuals"] = std::move(res);
    return j;
}

ordered_json solve_summary(const ObstacleSolution& s) {
    return {{"comp_residual", s.comp_residual},
            {"pde_residual", s.pde_residual},
            {"sweeps", s.sweeps},
            {"refinements", s.refinements},
            {"cg_iterations", s.cg_iterations},
            {"warnings", s.warnings}};
}

struct Setup {
    Grid grid;
    Scenario scenario;
    StencilOperator op;
};

Setup setup(const ScenarioConfig& cfg) {
    Grid g = cfg.grid();
    Scenario s = cfg.operator_scenario();
    StencilOperator op = s.assemble(g);
    return {g, std::move(s), std::move(op)};
}

// --- green ---------------------------------------------------------------

void cmd_green(const ScenarioConfig& cfg, const Output& out) {
    const Setup st = setup(cfg);
    const Node x0 = st.grid.nearest_node(cfg.center);
    const GreenFunction green = compute_green(st.op, x0);
    write_field_csv(out.path("green.csv"), green.field);
    if (cfg.pgm) write_field_pgm(out.path("green.pgm"), green.field);
    ordered_json j;
    j["operator"] = st.op.label();
    j["n_side"] = st.grid.n_side();
    j["h"] = st.grid.h();
    j["pole"] = point_json(st.grid.coord(x0));
    j["cg_iterations"] = green.stats.iterations;
    j["relative_residual"] = green.stats.relative_residual;
    j["boundary_flux"] = boundary_flux(st.op, green.field);
    j["value_at_pole"] = green.field.at(x0);
    j["min_value"] = green.field.min();
    out.json("green.json", j);
}

// --- family / mvt / converse ---------------------------------------------

MvsFamily family_for(const ScenarioConfig& cfg, const Setup& st) {
    const Node x0 = st.grid.nearest_node(cfg.center);
    const GreenFunction green = compute_green(st.op, x0);
    return build_family(st.op, green, cfg.radii);
}

void cmd_family(const ScenarioConfig& cfg, const Output& out) {
    const Setup st = setup(cfg);
    const MvsFamily fam = family_for(cfg, st);
    out.text("family.json", family_json(fam, st.op));
    for (std::size_t i = 0; i < fam.radii.size(); ++i) {
        write_polylines_csv(out.path("polylines_" + std::to_string(i) + ".csv"), fam.regions[i].boundary.loops);
        if (cfg.pgm) write_field_pgm(out.path("height_" + std::to_string(i) + ".pgm"), fam.solutions[i].w);
    }
}

bool looks_subharmonic(const StencilOperator& op, const ScalarField& v) {
    const ScalarField lv = op.apply(v);
    const double tol = 1e-9 * std::max(1.0, lv.max_abs());
    for (std::size_t k = 0; k < lv.size(); ++k)
        if (!op.is_dirichlet(k) && lv[k] < -tol) return false;
    return true;
}

void cmd_mvt(const ScenarioConfig& cfg, const Output& out) {
    const Setup st = setup(cfg);
    const MvsFamily fam = family_for(cfg, st);
    const ScalarField v = field_of(st.grid, cfg.function);
    const bool sub = cfg.subsolution.value_or(looks_subharmonic(st.op, v));
    const MeanValueReport rep = verify_mean_value(v, fam, sub);

    std::ostringstream csv;
    csv << "r,average,center_value,deviation\n";
    for (std::size_t i = 0; i < fam.radii.size(); ++i)
        csv << format_real(fam.radii[i]) << ',' << format_real(rep.averages[i]) << ','
            << format_real(rep.center_value) << ',' << format_real(rep.averages[i] - rep.center_value) << '\n';
    out.text("averages.csv", csv.str());

    std::string verdict;
    if (rep.max_deviation <= 1e-3 * std::max(1.0, std::abs(rep.center_value))) verdict = "equal";
    else if (rep.chain_holds && rep.strictly_increasing) verdict = "increasing";
    else if (rep.chain_holds) verdict = "nondecreasing";
    else verdict = "violated";

    ordered_json j;
    j["operator"] = st.op.label();
    j["function"] = cfg.function;
    j["subsolution"] = sub;
    j["center_value"] = rep.center_value;
    j["averages"] = rep.averages;
    j["chain_holds"] = rep.chain_holds;
    j["strictly_increasing"] = rep.strictly_increasing;
    j["max_violation"] = rep.max_violation;
    j["max_deviation"] = rep.max_deviation;
    j["verdict"] = verdict;
    out.json("mvt.json", j);
}

void cmd_converse(const ScenarioConfig& cfg, const Output& out) {
    const Setup st = setup(cfg);
    const ScalarField v = field_of(st.grid, cfg.function);
    std::vector<Node> centers;
    const std::vector<Point> pts = cfg.centers.empty() ? std::vector<Point>{cfg.center} : cfg.centers;
    for (const Point& p : pts) centers.push_back(st.grid.nearest_node(p));
    const auto entries = converse_check(v, st.op, centers, cfg.radius);

    std::ostringstream csv;
    csv << "x,y,value,average,residual,stencil_residual\n";
    double max_res = 0.0;
    double max_stencil = 0.0;
    for (const auto& e : entries) {
        const Point p = st.grid.coord(e.center);
        csv << format_real(p.x) << ',' << format_real(p.y) << ',' << format_real(e.value) << ','
            << format_real(e.average) << ',' << format_real(e.residual) << ',' << format_real(e.stencil_residual)
            << '\n';
        max_res = std::max(max_res, e.residual);
        max_stencil = std::max(max_stencil, e.stencil_residual);
    }
    out.text("converse.csv", csv.str());
    ordered_json j;
    j["operator"] = st.op.label();
    j["function"] = cfg.function;
    j["radius"] = cfg.radius;
    j["centers"] = entries.size();
    j["max_residual"] = max_res;
    j["max_stencil_residual"] = max_stencil;
    out.json("converse.json", j);
}

// --- blowup / singshift --------------------------------------------------

bool is_identity(const Sym2& a) { return a.m11 == 1.0 && a.m12 == 0.0 && a.m22 == 1.0; }

Sym2 coefficients_at(const Scenario& s, Point p) {
    const auto a = s.effective_coefficients(p);
    return {a[0], a[1], a[2]};
}

void cmd_blowup(const ScenarioConfig& cfg, const Output& out) {
    const Setup st = setup(cfg);
    const ScalarField data = field_of(st.grid, cfg.data_expression());
    const ObstacleSolution sol = solve_classical(st.op, data);
    const Node q = st.grid.nearest_node(cfg.point);
    const Node origin = st.grid.nearest_node({0.0, 0.0});
    const Sym2 a0 = coefficients_at(st.scenario, st.grid.coord(q));
    ScalarField w = sol.w;
    bool normalized = false;
    if (!is_identity(a0) && q == origin) {
        w = normalize_coordinates(sol.w, a0);
        normalized = true;
    }
    if (cfg.pgm) write_field_pgm(out.path("solution.pgm"), sol.w);

    ordered_json j;
    j["operator"] = st.op.label();
    j["data"] = cfg.data_expression();
    j["solve"] = solve_summary(sol);
    j["normalized"] = normalized;
    if (!on_free_boundary(w, q)) {
        j["q"] = point_json(st.grid.coord(q));
        j["verdict"] = "not-on-free-boundary";
        out.json("blowup.json", j);
        std::ostringstream os;
        os << "point (" << st.grid.coord(q).x << ", " << st.grid.coord(q).y << ") is not on the free boundary";
        throw PreconditionError(os.str());
    }
    const BlowupClassification c = classify(w, q);
    std::vector<double> deltas;
    for (double steps : cfg.nondegeneracy_steps) deltas.push_back(steps * st.grid.h());
    const NondegeneracyConstants nd = nondegeneracy(w, q, deltas);
    j["q"] = point_json(c.position);
    j["classification"] = classification_summary(c);
    j["nondegeneracy"] = {{"deltas", deltas}, {"C1", nd.C1}, {"C2", nd.C2}};
    out.json("blowup.json", j);
}

void cmd_singshift(const ScenarioConfig& cfg, const Output& out) {
    const Setup st = setup(cfg);
    const ScalarField data = field_of(st.grid, cfg.data_expression());
    const ObstacleSolution sol = solve_classical(st.op, data);
    const Node origin = st.grid.nearest_node({0.0, 0.0});
    const ScalarField w = normalize_coordinates(sol.w, coefficients_at(st.scenario, st.grid.coord(origin)));

    ordered_json j;
    j["operator"] = st.op.label();
    j["data"] = cfg.data_expression();
    j["seed_solve"] = solve_summary(sol);
    if (!on_free_boundary(w, origin)) {
        j["seed"] = {{"verdict", "not-on-free-boundary"}};
        out.json("singshift.json", j);
        throw PreconditionError("the origin is not a free boundary point of the seed solution");
    }
    const BlowupClassification seed = classify(w, origin);
    j["seed"] = classification_summary(seed);
    if (seed.verdict != Verdict::singular) {
        out.json("singshift.json", j);
        throw PreconditionError("the origin is a " + to_string(seed.verdict) +
                                " free boundary point of the seed solution, not a singular one");
    }

    ShiftOptions so;
    so.target_nodes_across = cfg.lattice_nodes;
    const DecayReport decay = shift_decay(w, cfg.shift_radii, cfg.tol_T, so);
    const PreservationReport pres = preservation_report(decay.results, seed.stratum);

    std::ostringstream csv;
    csv << "r,S,t,steps,status,pinched\n";
    ordered_json entries = ordered_json::array();
    for (std::size_t i = 0; i < decay.results.size(); ++i) {
        const auto& r = decay.results[i];
        csv << format_real(r.r) << ',' << format_real(r.S) << ',' << format_real(r.S * r.r * r.r) << ','
            << r.steps << ',' << to_string(r.status) << ',' << (r.pinched ? 1 : 0) << '\n';
        ordered_json e;
        e["r"] = r.r;
        e["S"] = r.S;
        e["t"] = r.S * r.r * r.r;
        e["bracket_steps"] = r.steps;
        e["status"] = to_string(r.status);
        e["pinched"] = r.pinched;
        e["lattice_n_side"] = r.solution.w.grid().n_side();
        e["solve"] = solve_summary(r.solution);
        e["classification"] = classification_summary(pres.entries[i].classification);
        entries.push_back(std::move(e));
    }
    out.text("shifts.csv", csv.str());

    const ScanResult scan = uniqueness_scan(w, cfg.scan_radius, linear_grid(cfg.T_lo, cfg.T_hi, cfg.T_count), so);
    std::ostringstream scsv;
    scsv << "T,status\n";
    for (std::size_t k = 0; k < scan.T.size(); ++k) scsv << format_real(scan.T[k]) << ',' << to_string(scan.statuses[k]) << '\n';
    out.text("scan.csv", scsv.str());

    j["shifts"] = std::move(entries);
    j["decay"] = {{"envelope_ok", decay.envelope_ok}, {"final_le_first", decay.final_le_first}};
    j["preservation"] = {{"seed_stratum", pres.seed_stratum},
                         {"stable_radius", pres.stable_radius},
                         {"preserved", pres.preserved},
                         {"all_singular", pres.all_singular}};
    j["scan"] = {{"r", scan.r},
                 {"monotone", scan.monotone},
                 {"single_band", scan.single_band},
                 {"band_width", scan.band_width},
                 {"continuity_excess", scan.continuity_excess},
                 {"violations", scan.violations}};
    out.json("singshift.json", j);
}

void cmd_scenarios(std::ostream& os) {
    for (const auto& s : builtin_scenarios()) {
        os << s.name << "\t" << (s.kind == Scenario::Kind::metric ? "metric" : "coefficients") << "\t"
           << s.description << "\n";
    }
}

}  // namespace

void run_command(const std::string& command, const ScenarioConfig& config, const std::string& out_dir) {
    if (command == "scenarios") {
        cmd_scenarios(std::cout);
        return;
    }
    const Output out(out_dir);
    if (command == "green") cmd_green(config, out);
    else if (command == "family") cmd_family(config, out);
    else if (command == "mvt") cmd_mvt(config, out);
    else if (command == "converse") cmd_converse(config, out);
    else if (command == "blowup") cmd_blowup(config, out);
    else if (command == "singshift") cmd_singshift(config, out);
    else throw ConfigError("unknown subcommand '" + command + "'");
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Mean value sets of divergence-form elliptic operators"};
    app.footer(config_help());
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir = ".";
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"green", "Green's function"},
        {"family", "mean value set family"},
        {"mvt", "mean value chain"},
        {"converse", "converse mean value check"},
        {"blowup", "blow-up classification"},
        {"singshift", "singular shift pipeline"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
    }
    app.add_subcommand("scenarios", "list the built-in operators");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "mvset: " << e.what() << "\n";
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const ScenarioConfig cfg = command == "scenarios" ? ScenarioConfig{} : load_config(config_path);
        run_command(command, cfg, out_dir);
    } catch (const Error& e) {
        std::cerr << "mvset " << command << ": " << e.what() << "\n";
        return e.exit_code();
    }
    return 0;
}

}  // namespace mvset

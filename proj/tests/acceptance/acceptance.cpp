// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mvset/error.hpp"
#include "mvset/freeboundary.hpp"
#include "mvset/greens.hpp"
#include "mvset/mvs.hpp"
#include "mvset/obstacle.hpp"
#include "mvset/scenario.hpp"
#include "mvset/singshift.hpp"

#ifndef MVSET_EXECUTABLE
#error "MVSET_EXECUTABLE must name the mvset binary"
#endif

using namespace mvset;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Grid box(int n) { return make_grid({-1.0, -1.0}, {1.0, 1.0}, n); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Residuals of every solution the run produces, for criterion 6.
struct ResidualLog {
    double comp = 0.0;
    double pde = 0.0;
    int solves = 0;
    void add(const ObstacleSolution& s) {
        comp = std::max(comp, s.comp_residual);
        pde = std::max(pde, s.pde_residual);
        ++solves;
    }
};

ResidualLog residuals;

struct Scenario257 {
    std::string name;
    Grid grid;
    StencilOperator op;
    GreenFunction green;
};

Scenario257 setup(const std::string& name, int n) {
    const Grid g = box(n);
    StencilOperator op = find_scenario(name).assemble(g);
    GreenFunction G = compute_green(op, g.nearest_node({0.0, 0.0}));
    return {name, g, std::move(op), std::move(G)};
}

double mean_boundary_radius(const RegionDecomposition& r, Point c) {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& loop : r.boundary.loops)
        for (Point p : loop) {
            sum += norm(p - c);
            ++count;
        }
    return count ? sum / static_cast<double>(count) : 0.0;
}

struct Criterion {
    int id;
    std::string title;
    std::function<bool(std::ostringstream&)> check;
};

// Shared state between criteria that reuse solves.
struct Shared {
    std::vector<Scenario257> ops;     // laplace, smooth-c11, conformal at 257
    std::vector<MvsFamily> families;  // radii {0.2, 0.3, 0.4}
};

Shared shared;

const std::vector<double> family_radii{0.2, 0.3, 0.4};

void ensure_families() {
    if (!shared.families.empty()) return;
    for (const char* name : {"laplace", "smooth-c11", "conformal"}) {
        shared.ops.push_back(setup(name, 257));
        shared.families.push_back(build_family(shared.ops.back().op, shared.ops.back().green, family_radii));
        for (const auto& s : shared.families.back().solutions) residuals.add(s);
    }
}

bool c1_disc_law(std::ostringstream& os) {
    const auto t0 = Clock::now();
    const Scenario257 s = setup("laplace", 257);
    const ObstacleSolution sol = solve_mean_value(s.op, s.green, 0.4);
    const double elapsed = seconds_since(t0);
    residuals.add(sol);
    const RegionDecomposition reg = extract_regions(sol);
    const double target = 0.4 / std::sqrt(M_PI);
    const double tol = 2.0 * s.grid.h();
    double worst = 0.0;
    for (std::size_t k : reg.fb.members())
        worst = std::max(worst, std::abs(norm(s.grid.coord(s.grid.node_of(k))) - target));
    os << "mean boundary radius " << fmt("%.6f", mean_boundary_radius(reg, {0.0, 0.0})) << " vs "
       << fmt("%.6f", target) << ", " << reg.fb.count() << " fb nodes within " << fmt("%.4f", worst) << " (tol "
       << fmt("%.4f", tol) << "), " << fmt("%.2f", elapsed) << " s";
    return !reg.fb.empty() && worst <= tol && elapsed <= 60.0;
}

bool c2_volume(std::ostringstream& os) {
    bool ok = true;
    for (const char* name : {"laplace", "smooth-c11", "conformal"}) {
        double err[2] = {0.0, 0.0};
        double chi = 0.0;
        int k = 0;
        for (int n : {257, 513}) {
            const Scenario257 s = setup(name, n);
            MvsFamily f = build_family(s.op, s.green, {0.4});
            residuals.add(f.solutions[0]);
            const VolumeEntry v = volume_identity(f, s.op)[0];
            err[k++] = v.relative_error;
            if (n == 257) chi = v.discrete_chi_volume;
        }
        const double ratio = std::abs(err[0]) / std::abs(err[1]);
        const bool pass = std::abs(err[0]) <= 0.02 && ratio >= 1.8;
        ok = ok && pass;
        os << name << " err " << fmt("%+.4f", err[0]) << " (513: " << fmt("%+.4f", err[1]) << ", ratio "
           << fmt("%.2f", ratio) << ", chi volume " << fmt("%.10f", chi) << "); ";
    }
    return ok;
}

bool c3_nesting(std::ostringstream& os) {
    ensure_families();
    bool ok = true;
    for (std::size_t s = 0; s < shared.families.size(); ++s) {
        const MvsFamily& f = shared.families[s];
        const double h = shared.ops[s].grid.h();
        os << shared.ops[s].name << (f.nesting.nested() ? " nested" : " NOT nested") << " gaps";
        ok = ok && f.nesting.nested();
        for (std::size_t k = 0; k + 1 < f.regions.size(); ++k) {
            const double gap = strict_gap(f.regions[k], f.regions[k + 1]);
            os << ' ' << fmt("%.4f", gap);
            ok = ok && gap >= 2.0 * h;
            if (shared.ops[s].name == "laplace") ok = ok && std::abs(gap - 0.1 / std::sqrt(M_PI)) <= 3.0 * h;
        }
        os << "; ";
    }
    os << "2h = " << fmt("%.4f", 2.0 * shared.ops[0].grid.h()) << ", laplace target " << fmt("%.4f", 0.1 / std::sqrt(M_PI));
    return ok;
}

bool c4_mean_value(std::ostringstream& os) {
    ensure_families();
    const MvsFamily& f = shared.families[0];
    const Grid& g = shared.ops[0].grid;
    const auto one = verify_mean_value(ScalarField(g, 1.0), f, false);
    const auto lin = verify_mean_value(ScalarField::from_function(g, [](Point p) { return p.x; }), f, false);
    const auto sq = verify_mean_value(ScalarField::from_function(g, [](Point p) { return p.x * p.x + p.y * p.y; }), f, true);
    double worst = 0.0;
    for (std::size_t k = 0; k < f.radii.size(); ++k) {
        const double expect = f.radii[k] * f.radii[k] / (2.0 * M_PI);
        worst = std::max(worst, std::abs(sq.averages[k] - expect) / expect);
    }
    os << "|avg 1 - 1| " << fmt("%.1e", one.max_deviation) << ", |avg x| " << fmt("%.1e", lin.max_deviation)
       << ", x^2+y^2 " << (sq.strictly_increasing ? "strictly increasing" : "NOT increasing") << " worst rel err "
       << fmt("%.4f", worst);
    return one.max_deviation <= 1e-12 && lin.max_deviation <= 1e-3 && sq.strictly_increasing && sq.chain_holds &&
           worst <= 0.05;
}

bool c5_comparison(std::ostringstream& os) {
    const double eps = 0.01;
    bool ok = true;
    for (const char* name : {"smooth-c11", "perturbed"}) {
        const Grid g = box(257);
        const StencilOperator op = find_scenario(name).assemble(g);
        const auto d1 = ScalarField::from_function(g, [](Point p) { return 0.5 * p.x * p.x + 0.1 * p.y * p.y * p.x * p.x; });
        auto d2 = d1;
        for (auto& v : d2.values()) v += eps;
        const ObstacleSolution s1 = solve_classical(op, d1), s2 = solve_classical(op, d2);
        residuals.add(s1);
        residuals.add(s2);
        std::size_t unordered = 0;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (s1.w[k] > s2.w[k]) ++unordered;
        const ComparisonReport c = comparison_check(s1, s2, eps);
        const bool pass = unordered == 0 && c.sup_difference <= eps + 1e-4;
        ok = ok && pass;
        os << name << " sup diff " << fmt("%.8f", c.sup_difference) << ", order violations " << unordered << "; ";
    }
    return ok;
}

bool c6_certification(std::ostringstream& os) {
    // Earlier criteria logged their solves; add the two-initialisation check.
    double agree = 0.0;
    for (const char* name : {"laplace", "smooth-c11", "conformal"}) {
        const Scenario257 s = setup(name, 257);
        const auto a = solve_mean_value(s.op, s.green, 0.4, mean_value_options(s.op, s.green, 0.4, InitialGuess::zero));
        const auto b = solve_mean_value(s.op, s.green, 0.4,
                                        mean_value_options(s.op, s.green, 0.4, InitialGuess::unconstrained_clipped));
        residuals.add(a);
        residuals.add(b);
        for (std::size_t k = 0; k < a.w.size(); ++k) agree = std::max(agree, std::abs(a.w[k] - b.w[k]));
    }
    os << residuals.solves << " solves: max comp " << fmt("%.2e", residuals.comp) << ", max pde "
       << fmt("%.2e", residuals.pde) << ", initialisations differ by " << fmt("%.2e", agree);
    return residuals.comp <= 1e-10 && residuals.pde <= 1e-8 && agree <= 1e-8;
}

bool c7_shift(std::ostringstream& os) {
    const Grid g = box(257);
    const auto w = ScalarField::from_function(g, [](Point p) { return 0.5 * p.x * p.x; });
    bool ok = true;
    for (double r : {0.8, 0.4, 0.2}) {
        const ShiftSearchResult res = find_shift(w, r, 1e-6);
        residuals.add(res.solution);
        ok = ok && std::abs(res.S) <= 1e-5 && res.steps <= 25;
        os << "S(" << r << ") " << fmt("%+.2e", res.S) << " in " << res.steps << " steps; ";
    }
    const ScanResult scan = uniqueness_scan(w, 0.4, linear_grid(-0.5, 0.5, 41));
    std::string pattern;
    for (auto s : scan.statuses) pattern += static_cast<char>('0' + rank(s));
    os << "scan " << pattern << (scan.ok() ? " ok" : " NOT ok");
    return ok && scan.ok();
}

bool c8_preservation(std::ostringstream& os) {
    const Grid g = box(385);
    const Scenario& sc = find_scenario("perturbed");
    const StencilOperator op = sc.assemble(g);
    const Node o = g.nearest_node({0.0, 0.0});
    const auto a0 = sc.effective_coefficients(g.coord(o));
    const bool identity_at_origin = a0[0] == 1.0 && a0[1] == 0.0 && a0[2] == 1.0;

    const ObstacleSolution seed = solve_classical(op, ScalarField::from_function(g, [](Point p) {
                                                      return 0.5 * p.x * p.x * (1.0 + 0.05 * p.y);
                                                  }));
    residuals.add(seed);
    const BlowupClassification c0 = classify(seed.w, o);
    const std::vector<double> radii{0.8, 0.4, 0.2, 0.1};
    const DecayReport decay = shift_decay(seed.w, radii, 1e-6);
    for (const auto& r : decay.results) residuals.add(r.solution);
    const PreservationReport pres = preservation_report(decay.results, c0.stratum);
    bool all = identity_at_origin && c0.verdict == Verdict::singular && c0.stratum == 1;
    os << "seed " << to_string(c0.verdict) << " stratum " << c0.stratum << "; ";
    for (const auto& e : pres.entries) {
        all = all && e.classification.verdict == Verdict::singular && e.classification.stratum == 1;
        os << "r " << e.r << " S " << fmt("%+.2e", e.S) << ' ' << to_string(e.classification.verdict) << '/'
           << e.classification.stratum << "; ";
    }
    const bool decays = std::abs(decay.results.back().S) < std::abs(decay.results.front().S);

    const ObstacleSolution half = solve_classical(op, ScalarField::from_function(g, [](Point p) {
                                                      return p.x > 0.0 ? 0.5 * p.x * p.x * (1.0 + 0.05 * p.y) : 0.0;
                                                  }));
    residuals.add(half);
    const BlowupClassification ch = classify(half.w, o);
    const double angle = std::acos(std::min(1.0, ch.normal.x)) * 180.0 / M_PI;
    os << "control " << to_string(ch.verdict) << " normal off by " << fmt("%.3f", angle) << " deg";
    return all && decays && ch.verdict == Verdict::regular && angle <= 5.0;
}

bool c9_fitter(std::ostringstream& os) {
    bool ok = true;
    for (int n : {257, 513}) {
        const Grid g = box(n);
        const Node o = g.nearest_node({0.0, 0.0});
        for (double angle : {0.0, 0.7}) {
            const Point nv{std::cos(angle), std::sin(angle)};
            const auto c = classify(ScalarField::from_function(g, [nv](Point p) { return halfspace_profile(p, nv); }), o);
            const bool pass = c.verdict == Verdict::regular && c.normal.x * nv.x + c.normal.y * nv.y > std::cos(M_PI / 36.0);
            ok = ok && pass;
            os << n << " half-space " << to_string(c.verdict) << "; ";
        }
        for (const Sym2& M : {Sym2{1.0, 0.0, 0.0}, Sym2{0.5, 0.0, 0.5}}) {
            const auto c = classify(ScalarField::from_function(g, [M](Point p) { return M.quadratic(p); }), o);
            const double tr = c.M.trace();
            ok = ok && c.verdict == Verdict::singular && tr >= 0.9 && tr <= 1.1 && c.gamma > 0.0;
            os << n << " M=(" << M.m11 << "," << M.m22 << ") " << to_string(c.verdict) << " tr " << fmt("%.4f", tr)
               << " gamma " << fmt("%.3f", c.gamma) << "; ";
        }
    }
    return ok;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool c10_determinism(std::ostringstream& os) {
    const fs::path root = fs::temp_directory_path() / "mvset_acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root);
    struct Run {
        const char* command;
        const char* config;
    };
    const std::vector<Run> runs{
        {"green", "[grid]\nn_side = 129\n[operator]\nscenario = conformal\n"},
        {"family", "[grid]\nn_side = 129\n[operator]\nscenario = smooth-c11\n"},
        {"mvt", "[grid]\nn_side = 129\n"},
        {"converse", "[grid]\nn_side = 129\n[run]\ncenters = 0, 0; 0.1, -0.1\n"},
        {"blowup", "[grid]\nn_side = 129\n[run]\ndata = 0.5*pos(x)^2\n"},
        {"singshift", "[grid]\nn_side = 257\n[run]\ndata = 0.5*x^2\nshift_radii = 0.4, 0.2\nT_grid = -0.5, 0.5, 11\n"},
    };
    bool ok = true;
    std::size_t files = 0;
    for (const Run& r : runs) {
        const fs::path cfg = root / (std::string(r.command) + ".cfg");
        std::ofstream(cfg) << r.config;
        for (const char* tag : {"a", "b"}) {
            const fs::path out = root / (std::string(r.command) + "_" + tag);
            const std::string cmd = std::string("\"") + MVSET_EXECUTABLE + "\" " + r.command + " --config \"" +
                                    cfg.string() + "\" --out \"" + out.string() + "\" > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                ok = false;
                os << r.command << " failed; ";
            }
        }
        for (const auto& e : fs::directory_iterator(root / (std::string(r.command) + "_a"))) {
            const auto ext = e.path().extension();
            if (ext != ".csv" && ext != ".json") continue;
            ++files;
            if (slurp(e.path()) != slurp(root / (std::string(r.command) + "_b") / e.path().filename())) {
                ok = false;
                os << e.path().filename().string() << " differs; ";
            }
        }
    }
    fs::remove_all(root);
    os << runs.size() << " commands, " << files << " CSV/JSON files compared";
    return ok && files > 0;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Laplacian disc law", c1_disc_law},
        {2, "volume identity", c2_volume},
        {3, "nesting and strictness", c3_nesting},
        {4, "mean value chain", c4_mean_value},
        {5, "comparison principle", c5_comparison},
        {9, "blow-up fitter", c9_fitter},
        {7, "shift search", c7_shift},
        {8, "decay and preservation", c8_preservation},
        {10, "determinism", c10_determinism},
        // Last, so that it sees every solve above.
        {6, "LCP certification", c6_certification},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        std::ostringstream detail;
        bool pass = false;
        const auto t0 = Clock::now();
        try {
            pass = c.check(detail);
        } catch (const std::exception& e) {
            detail << "error: " << e.what();
        }
        if (!pass) ++failed;
        std::cout << (pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << ": " << detail.str() << " ("
                  << fmt("%.1f", seconds_since(t0)) << " s)" << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}

#include "mvset/scenario.hpp"

#include <cmath>
#include <numbers>

#include "mvset/error.hpp"
#include "mvset/expression.hpp"

namespace mvset {

namespace {

constexpr double pi = std::numbers::pi;

// Perturbation strength of the manufactured singular seed: w = x^2 (1 + k y) / 2.
constexpr double seed_kappa = 0.05;

std::vector<Scenario> make_builtins() {
    std::vector<Scenario> out;
    out.push_back({"laplace", "a = identity", Scenario::Kind::coefficients,
                   [](Point) { return std::array<double, 3>{1.0, 0.0, 1.0}; }, "0.5*x^2"});
    out.push_back({"smooth-c11",
                   "a11 = 1 + 0.3 sin(pi x) cos(pi y/2), a22 = 1 - 0.3 sin(pi y) cos(pi x/2), "
                   "a12 = 0.1 sin(pi (x+y))",
                   Scenario::Kind::coefficients,
                   [](Point p) {
                       return std::array<double, 3>{1.0 + 0.3 * std::sin(pi * p.x) * std::cos(0.5 * pi * p.y),
                                                    0.1 * std::sin(pi * (p.x + p.y)),
                                                    1.0 - 0.3 * std::sin(pi * p.y) * std::cos(0.5 * pi * p.x)};
                   },
                   "0.5*x^2"});
    out.push_back({"conformal", "g = exp(2 phi) identity, phi = 0.1 x", Scenario::Kind::metric,
                   [](Point p) {
                       const double s = std::exp(0.2 * p.x);
                       return std::array<double, 3>{s, 0.0, s};
                   },
                   "0.5*x^2"});
    out.push_back({"diag-metric", "g = diag(4, 1)", Scenario::Kind::metric,
                   [](Point) { return std::array<double, 3>{4.0, 0.0, 1.0}; }, ""});
    out.push_back({"diag-coeff", "a = diag(2, 1)", Scenario::Kind::coefficients,
                   [](Point) { return std::array<double, 3>{2.0, 0.0, 1.0}; }, ""});
    out.push_back({"perturbed",
                   "a11 = 1/(1 + 0.05 y), a22 = 1 + 0.3 sin(pi x/2)^2, a12 = 0; "
                   "x^2 (1 + 0.05 y)/2 solves L u = 1 with a singular line of contact",
                   Scenario::Kind::coefficients,
                   [](Point p) {
                       const double s = std::sin(0.5 * pi * p.x);
                       return std::array<double, 3>{1.0 / (1.0 + seed_kappa * p.y), 0.0, 1.0 + 0.3 * s * s};
                   },
                   "0.5*x^2*(1+0.05*y)"});
    return out;
}

}  // namespace

StencilOperator Scenario::assemble(const Grid& grid) const {
    ScalarField t11(grid), t12(grid), t22(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto t = tensor(grid.coord(grid.node_of(k)));
        t11[k] = t[0];
        t12[k] = t[1];
        t22[k] = t[2];
    }
    if (kind == Kind::metric) return assemble_beltrami(ChartMetric(t11, t12, t22), grid);
    return assemble_divergence(CoefficientField(t11, t12, t22), grid);
}

std::array<double, 3> Scenario::effective_coefficients(Point p) const {
    const auto t = tensor(p);
    if (kind == Kind::coefficients) return t;
    const double det = t[0] * t[2] - t[1] * t[1];
    if (!(det > 0.0)) throw PreconditionError("metric is degenerate at the requested point");
    const double rho = std::sqrt(det);
    return {rho * t[2] / det, -rho * t[1] / det, rho * t[0] / det};
}

const std::vector<Scenario>& builtin_scenarios() {
    static const std::vector<Scenario> all = make_builtins();
    return all;
}

const Scenario& find_scenario(const std::string& name) {
    for (const auto& s : builtin_scenarios())
        if (s.name == name) return s;
    throw ConfigError("unknown scenario '" + name + "'");
}

Scenario inline_scenario(Scenario::Kind kind, const std::string& t11, const std::string& t12,
                         const std::string& t22) {
    const Expression e11(t11);
    const Expression e12(t12);
    const Expression e22(t22);
    Scenario s;
    s.name = "inline";
    s.description = (kind == Scenario::Kind::metric ? "g = [" : "a = [") + t11 + ", " + t12 + "; " + t12 +
                    ", " + t22 + "]";
    s.kind = kind;
    s.tensor = [e11, e12, e22](Point p) { return std::array<double, 3>{e11(p), e12(p), e22(p)}; };
    return s;
}

}  // namespace mvset

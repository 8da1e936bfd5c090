#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "mvset/elliptic.hpp"
#include "mvset/error.hpp"
#include "mvset/greens.hpp"
#include "mvset/scenario.hpp"

using namespace mvset;

TEST_CASE("solve_linear recovers a quadratic") {
    const Grid g = testing::box(33);
    const StencilOperator op = assemble_laplacian(g);
    const auto exact = ScalarField::from_function(g, [](Point p) { return p.x * p.x + p.y * p.y; });
    LinearSolveStats st;
    const ScalarField u = solve_linear(op, ScalarField(g, -4.0), exact, &st);
    CHECK(testing::max_abs_diff(u, exact) < 1e-9);
    CHECK(st.relative_residual <= 1e-10);
    CHECK(st.iterations > 0);
}

TEST_CASE("discrete delta has unit weighted mass") {
    const Grid g = testing::box(33);
    const StencilOperator op = find_scenario("conformal").assemble(g);
    const Node p{10, 20};
    const ScalarField d = discrete_delta(op, p);
    double mass = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) mass += op.rho(k) * d[k] * g.h() * g.h();
    CHECK(mass == doctest::Approx(1.0));
    CHECK(d.at(p) == doctest::Approx(1.0 / (op.rho(g.index(p)) * g.h() * g.h())));
}

TEST_CASE("green function of the laplacian") {
    const Grid g = testing::box(129);
    const StencilOperator op = assemble_laplacian(g);
    const Node o = testing::origin(g);
    const GreenFunction G = compute_green(op, o);
    CHECK(G.pole == o);
    CHECK(G.field.min() >= 0.0);
    CHECK(boundary_flux(op, G.field) == doctest::Approx(-1.0).epsilon(1e-9));
    // Symmetry of the square.
    CHECK(G.field.at(o.i + 7, o.j + 3) == doctest::Approx(G.field.at(o.i - 3, o.j + 7)).epsilon(1e-9));
    // G(rho) - G(2 rho) ~ ln 2 / (2 pi) away from the pole and the walls.
    const double dG = G.field.at(o.i + 8, o.j) - G.field.at(o.i + 16, o.j);
    CHECK(dG == doctest::Approx(std::log(2.0) / (2.0 * M_PI)).epsilon(2e-3));
}

TEST_CASE("green function flux for every scenario") {
    const Grid g = testing::box(65);
    for (const auto& s : builtin_scenarios()) {
        CAPTURE(s.name);
        const StencilOperator op = s.assemble(g);
        const GreenFunction G = compute_green(op, testing::origin(g));
        CHECK(boundary_flux(op, G.field) == doctest::Approx(-1.0).epsilon(1e-8));
        CHECK(G.field.min() >= 0.0);
    }
}

TEST_CASE("green pole needs a margin") {
    const Grid g = testing::box(33);
    const StencilOperator op = assemble_laplacian(g);
    CHECK_THROWS_AS(compute_green(op, Node{3, 16}), GeometryError);
    CHECK_NOTHROW(compute_green(op, Node{4, 16}));
}

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "mvset/elliptic.hpp"
#include "mvset/error.hpp"
#include "mvset/scenario.hpp"

using namespace mvset;

namespace {

double max_interior_error(const StencilOperator& op, const ScalarField& u, const std::function<double(Point)>& exact) {
    const ScalarField lu = op.apply(u);
    const Grid& g = op.grid();
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (op.is_dirichlet(k)) continue;
        err = std::max(err, std::abs(lu[k] - exact(g.coord(g.node_of(k)))));
    }
    return err;
}

}  // namespace

TEST_CASE("laplacian is exact on quadratics") {
    const Grid g = testing::box(33);
    const StencilOperator op = assemble_laplacian(g);
    CHECK(op.has_m_matrix_signs());
    CHECK(op.symmetry_defect() < 1e-14);

    const auto q = ScalarField::from_function(g, [](Point p) { return p.x * p.x + p.y * p.y + 3.0 * p.x * p.y; });
    CHECK(max_interior_error(op, q, [](Point) { return 4.0; }) < 1e-10);
    const auto lin = ScalarField::from_function(g, [](Point p) { return 2.0 * p.x - p.y + 1.0; });
    CHECK(max_interior_error(op, lin, [](Point) { return 0.0; }) < 1e-10);
    CHECK(op.apply(q)[0] == 0.0);
}

TEST_CASE("constant diagonal coefficients") {
    const Grid g = testing::box(33);
    const StencilOperator op = find_scenario("diag-coeff").assemble(g);
    const auto x2 = ScalarField::from_function(g, [](Point p) { return p.x * p.x; });
    const auto y2 = ScalarField::from_function(g, [](Point p) { return p.y * p.y; });
    CHECK(max_interior_error(op, x2, [](Point) { return 4.0; }) < 1e-10);
    CHECK(max_interior_error(op, y2, [](Point) { return 2.0; }) < 1e-10);
}

TEST_CASE("mixed constant coefficients reproduce a12 u_xy") {
    const Grid g = testing::box(33);
    const StencilOperator op = assemble_divergence(CoefficientField::constant(g, 1.0, 0.3, 1.0), g);
    const auto xy = ScalarField::from_function(g, [](Point p) { return p.x * p.y; });
    CHECK(max_interior_error(op, xy, [](Point) { return 0.6; }) < 1e-10);
}

TEST_CASE("variable coefficients converge at second order") {
    // L u = d/dx((1 + x^2/2) d/dx u) + d/dy u_y on u = sin(pi x) sin(pi y).
    auto run = [](int n) {
        const Grid g = testing::box(n);
        const StencilOperator op = inline_scenario(Scenario::Kind::coefficients, "1 + x^2/2", "0", "1").assemble(g);
        const auto u = ScalarField::from_function(g, [](Point p) { return std::sin(M_PI * p.x) * std::sin(M_PI * p.y); });
        return max_interior_error(op, u, [](Point p) {
            const double a = 1.0 + 0.5 * p.x * p.x;
            const double s = std::sin(M_PI * p.x) * std::sin(M_PI * p.y);
            return p.x * M_PI * std::cos(M_PI * p.x) * std::sin(M_PI * p.y) - (a + 1.0) * M_PI * M_PI * s;
        });
    };
    const double e1 = run(33), e2 = run(65);
    CHECK(e1 / e2 > 3.5);
}

TEST_CASE("beltrami operator of closed-form metrics") {
    const Grid g = testing::box(33);
    SUBCASE("flat metric is the laplacian") {
        const StencilOperator a = assemble_beltrami(ChartMetric::flat(g), g);
        const StencilOperator b = assemble_laplacian(g);
        for (std::size_t k = 0; k < g.size(); ++k)
            for (int s = 0; s < 9; ++s) CHECK(a.row(k)[s] == doctest::Approx(b.row(k)[s]));
    }
    SUBCASE("conformal metric divides by the conformal factor") {
        const StencilOperator op = find_scenario("conformal").assemble(g);
        const auto q = ScalarField::from_function(g, [](Point p) { return p.x * p.x + p.y * p.y; });
        CHECK(max_interior_error(op, q, [](Point p) { return 4.0 * std::exp(-0.2 * p.x); }) < 1e-10);
        const std::size_t k = g.index(5, 9);
        CHECK(op.rho(k) == doctest::Approx(std::exp(0.2 * g.coord(5, 9).x)));
    }
    SUBCASE("diagonal metric") {
        // g = diag(4, 1): L = u_xx / 4 + u_yy, rho = 2.
        const StencilOperator op = find_scenario("diag-metric").assemble(g);
        const auto x2 = ScalarField::from_function(g, [](Point p) { return p.x * p.x; });
        const auto y2 = ScalarField::from_function(g, [](Point p) { return p.y * p.y; });
        CHECK(max_interior_error(op, x2, [](Point) { return 0.5; }) < 1e-10);
        CHECK(max_interior_error(op, y2, [](Point) { return 2.0; }) < 1e-10);
        CHECK(op.rho(g.index(3, 3)) == doctest::Approx(2.0));
    }
}

TEST_CASE("ellipticity is checked") {
    const Grid g = testing::box(9);
    const auto c = CoefficientField::constant(g, 1.0, 2.0, 1.0);
    CHECK(c.bounds().lambda < 0.0);
    CHECK_THROWS_AS(check_ellipticity(c), PreconditionError);
    CHECK_THROWS_AS(assemble_divergence(c, g), PreconditionError);
    const auto b = check_ellipticity(CoefficientField::constant(g, 2.0, 0.0, 0.5));
    CHECK(b.lambda == doctest::Approx(0.5));
    CHECK(b.Lambda == doctest::Approx(2.0));
    const ChartMetric bad(ScalarField(g, 1.0), ScalarField(g, 1.0), ScalarField(g, 1.0));
    CHECK_THROWS_AS(assemble_beltrami(bad, g), PreconditionError);
}

TEST_CASE("boundary flux is the discrete divergence theorem") {
    const int n = 33;
    const Grid g = testing::box(n);
    for (const char* name : {"laplace", "smooth-c11", "conformal"}) {
        const StencilOperator op = find_scenario(name).assemble(g);
        const auto u = ScalarField::from_function(g, [](Point p) { return std::exp(p.x) * std::cos(0.7 * p.y) + p.x * p.y * p.y; });
        double total = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k)
            if (!op.is_dirichlet(k)) total += op.apply_row(u, k) * g.h() * g.h();
        CHECK(boundary_flux(op, u) == doctest::Approx(total).epsilon(1e-10));
    }
}

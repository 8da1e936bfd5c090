// Randomised invariants with fixed seeds.
#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "mvset/contour.hpp"
#include "mvset/elliptic.hpp"
#include "mvset/expression.hpp"
#include "mvset/freeboundary.hpp"
#include "mvset/mvs.hpp"
#include "mvset/obstacle.hpp"
#include "mvset/scenario.hpp"

using namespace mvset;

TEST_CASE("property: comparison principle for random data") {
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> coef(-0.5, 0.5), eps(0.0, 0.05);
    const Grid g = testing::box(33);
    const StencilOperator op = find_scenario("smooth-c11").assemble(g);
    for (int trial = 0; trial < 6; ++trial) {
        const double a = coef(rng), b = coef(rng), c = coef(rng), d = coef(rng);
        const auto data = ScalarField::from_function(g, [&](Point p) {
            return std::max(0.0, a + b * p.x + c * p.y + d * p.x * p.y + 0.5 * p.x * p.x);
        });
        const double e = eps(rng);
        auto shifted = data;
        for (auto& v : shifted.values()) v += e;
        const auto s1 = solve_classical(op, data);
        const auto s2 = solve_classical(op, shifted);
        const ComparisonReport r = comparison_check(s1, s2, e);
        CAPTURE(trial);
        CHECK(r.ordered());
        CHECK(r.sup_difference <= e + 1e-4);
        CHECK(s1.comp_residual <= 1e-10);
    }
}

TEST_CASE("property: operators annihilate constants and are symmetric") {
    const Grid g = testing::box(33);
    for (const auto& s : builtin_scenarios()) {
        const StencilOperator op = s.assemble(g);
        CAPTURE(s.name);
        CHECK(op.apply(ScalarField(g, 3.5)).max_abs() < 1e-10);
        CHECK(op.symmetry_defect() < 1e-12);
    }
}

TEST_CASE("property: Sym2 rotations preserve the spectrum") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0), ang(-M_PI, M_PI);
    for (int k = 0; k < 200; ++k) {
        const Sym2 m{u(rng), u(rng), u(rng)};
        const Sym2 r = m.rotated(ang(rng));
        CHECK(r.eigenvalues()[0] == doctest::Approx(m.eigenvalues()[0]).scale(1.0));
        CHECK(r.eigenvalues()[1] == doctest::Approx(m.eigenvalues()[1]).scale(1.0));
        const Sym2 p = m.psd_projection();
        CHECK(p.eigenvalues()[0] >= -1e-14);
        const Sym2 pp = p.psd_projection();
        CHECK(pp.m11 == doctest::Approx(p.m11).scale(1.0));
        CHECK(pp.m22 == doctest::Approx(p.m22).scale(1.0));
    }
}

TEST_CASE("property: separation is invariant under quarter turns") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        const double t = u(rng);
        const Sym2 m = Sym2{t, 0.0, 1.0 - t}.rotated(u(rng) * M_PI);
        CHECK(separation(m.rotated(M_PI / 2.0)) == doctest::Approx(separation(m)).epsilon(1e-6));
    }
}

TEST_CASE("property: traced area matches the node count of random discs") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> c(-0.3, 0.3), R(0.1, 0.5);
    const Grid g = testing::box(97);
    for (int k = 0; k < 20; ++k) {
        const NodeSet s = ball_nodes(g, {c(rng), c(rng)}, R(rng));
        const Contour ct = trace_boundary(s);
        const double counted = static_cast<double>(s.count()) * g.h() * g.h();
        CHECK(std::abs(ct.signed_area() - counted) <= g.h() * ct.perimeter());
        CHECK(ct.loops.size() == 1u);
    }
}

TEST_CASE("property: dilation distributes over union") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> node(0, 32);
    const Grid g = testing::box(33);
    for (int k = 0; k < 10; ++k) {
        NodeSet a(g), b(g);
        for (int m = 0; m < 6; ++m) {
            a.insert(Node{node(rng), node(rng)});
            b.insert(Node{node(rng), node(rng)});
        }
        const double d = 2.5 * g.h();
        CHECK(dilate(a.united(b), d) == dilate(a, d).united(dilate(b, d)));
        CHECK(a.complement().complement() == a);
        CHECK(a.subset_of(dilate(a, d)));
    }
}

TEST_CASE("property: expressions agree with direct evaluation") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const double a = std::round(u(rng) * 100.0) / 100.0, b = std::round(u(rng) * 100.0) / 100.0;
        const Expression e(std::to_string(a) + "*x^2 - " + std::to_string(b) + "*sin(y)");
        const Point p{u(rng), u(rng)};
        CHECK(e(p) == doctest::Approx(a * p.x * p.x - b * std::sin(p.y)));
    }
}

TEST_CASE("property: harmonic polynomials satisfy the mean value property off centre") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Grid g = testing::box(65);
    const StencilOperator op = assemble_laplacian(g);
    std::vector<Node> centers;
    for (int k = 0; k < 3; ++k) centers.push_back(Node{28 + 2 * k, 36 - 3 * k});
    const double a = u(rng), b = u(rng), c = u(rng);
    const auto v = ScalarField::from_function(g, [&](Point p) { return a * (p.x * p.x - p.y * p.y) + b * p.x * p.y + c * p.x; });
    for (const auto& e : converse_check(v, op, centers, 0.3)) CHECK(e.residual < 2e-3);
}

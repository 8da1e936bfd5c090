#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "mvset/error.hpp"
#include "mvset/freeboundary.hpp"

using namespace mvset;

namespace {

ScalarField halfspace(const Grid& g, double angle) {
    const Point n{std::cos(angle), std::sin(angle)};
    return ScalarField::from_function(g, [n](Point p) { return halfspace_profile(p, n); });
}

ScalarField quadratic(const Grid& g, const Sym2& M) {
    return ScalarField::from_function(g, [M](Point p) { return M.quadratic(p); });
}

}  // namespace

TEST_CASE("Sym2 algebra") {
    const Sym2 a{2.0, 1.0, 2.0};
    const auto ev = a.eigenvalues();
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(3.0));
    const Point ax = a.principal_axis();
    CHECK(std::abs(ax.x) == doctest::Approx(std::sqrt(0.5)));
    CHECK(ax.x * ax.y > 0.0);

    const Sym2 b = Sym2{1.0, 0.0, 0.0}.rotated(M_PI / 2.0);
    CHECK(b.m11 == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b.m22 == doctest::Approx(1.0));

    const Sym2 p = Sym2{1.0, 0.0, -0.5}.psd_projection();
    CHECK(p.m11 == doctest::Approx(1.0));
    CHECK(p.m22 == doctest::Approx(0.0));
    CHECK(Sym2{1.0, 2.0, 3.0}.quadratic({1.0, 1.0}) == doctest::Approx(4.0));
}

TEST_CASE("unit disc lattice") {
    const auto& pts = unit_disc_lattice();
    std::size_t expected = 0;
    for (int i = -16; i <= 16; ++i)
        for (int j = -16; j <= 16; ++j)
            if (i * i + j * j <= 256) ++expected;
    CHECK(pts.size() == expected);
    for (Point p : pts) CHECK(norm(p) <= 1.0 + 1e-12);
}

TEST_CASE("half-space profiles are regular") {
    for (int n : {129, 257}) {
        const Grid g = testing::box(n);
        for (double angle : {0.0, M_PI / 6.0, 2.0, -2.5}) {
            CAPTURE(n);
            CAPTURE(angle);
            const auto c = classify(halfspace(g, angle), testing::origin(g));
            CHECK(c.verdict == Verdict::regular);
            const double err = std::acos(std::min(1.0, c.normal.x * std::cos(angle) + c.normal.y * std::sin(angle)));
            CHECK(err < 5.0 * M_PI / 180.0);
            CHECK(c.stratum == -1);
            CHECK(c.scales.size() == 3u);
        }
    }
}

TEST_CASE("quadratic forms are singular with the right stratum") {
    const Grid g = testing::box(129);
    const auto line = classify(quadratic(g, {1.0, 0.0, 0.0}), testing::origin(g));
    CHECK(line.verdict == Verdict::singular);
    CHECK(line.stratum == 1);
    CHECK(line.M.trace() == doctest::Approx(1.0).epsilon(0.1));
    CHECK(line.gamma > 0.0);

    // The origin is an isolated zero: pick the neighbour-free test on the
    // data itself, which is positive around 0.
    const auto bowl = classify(quadratic(g, {0.5, 0.0, 0.5}), testing::origin(g));
    CHECK(bowl.verdict == Verdict::singular);
    CHECK(bowl.stratum == 0);
    CHECK(bowl.M.trace() == doctest::Approx(1.0).epsilon(0.1));
    CHECK(bowl.gamma >= 0.1);
}

TEST_CASE("classification is rotation equivariant") {
    const Grid g = testing::box(129);
    for (double theta : {0.3, 1.1, 2.4}) {
        const Sym2 M = Sym2{1.0, 0.0, 0.0}.rotated(theta);
        const auto c = classify(quadratic(g, M), testing::origin(g));
        CAPTURE(theta);
        CHECK(c.verdict == Verdict::singular);
        CHECK(c.stratum == 1);
        CHECK(std::abs(c.M.m11 - M.m11) < 0.05);
        CHECK(std::abs(c.M.m12 - M.m12) < 0.05);
        CHECK(std::abs(c.M.m22 - M.m22) < 0.05);
    }
}

TEST_CASE("separation margin") {
    CHECK(separation({0.5, 0.0, 0.5}) >= 0.1);
    CHECK(separation({1.0, 0.0, 0.0}) > 0.0);
    CHECK(separation({1.0, 0.0, 0.0}) == doctest::Approx(separation({0.0, 0.0, 1.0})));
}

TEST_CASE("nondegeneracy of the half-space profile") {
    const Grid g = testing::box(129);
    const double h = g.h();
    const auto nd = nondegeneracy(halfspace(g, 0.0), testing::origin(g), {8 * h, 16 * h, 32 * h});
    CHECK(nd.C1 == doctest::Approx(0.5).epsilon(0.1));
    CHECK(nd.C2 == doctest::Approx(1.0).epsilon(0.1));
    CHECK_THROWS_AS(nondegeneracy(halfspace(g, 0.0), testing::origin(g), {2 * h}), PreconditionError);
    CHECK_THROWS_AS(nondegeneracy(halfspace(g, 0.0), testing::origin(g), {}), PreconditionError);
}

TEST_CASE("classification preconditions") {
    const Grid g = testing::box(65);
    const Node o = testing::origin(g);
    CHECK_FALSE(on_free_boundary(ScalarField(g, 1.0), o));
    CHECK_FALSE(on_free_boundary(ScalarField(g), o));
    CHECK(on_free_boundary(halfspace(g, 0.0), o));
    CHECK_THROWS_AS(classify(ScalarField(g, 1.0), o), PreconditionError);
    CHECK_THROWS_AS(rescale(halfspace(g, 0.0), o, 2.0 * g.h()), PreconditionError);
    CHECK_THROWS_AS(rescale(halfspace(g, 0.0), Node{4, 32}, 8.0 * g.h()), GeometryError);
    const BlowupSample s = rescale(halfspace(g, 0.0), o, 8.0 * g.h());
    CHECK(s.values.size() == unit_disc_lattice().size());
}

TEST_CASE("classification json") {
    const Grid g = testing::box(65);
    const auto j = nlohmann::json::parse(classification_json(classify(halfspace(g, 0.0), testing::origin(g))));
    CHECK(j["verdict"] == "regular");
    CHECK(j["residuals"].size() == 3u);
}

TEST_CASE("rescaling is exact on homogeneous quadratics") {
    const Grid g = testing::box(129);
    const Node o = testing::origin(g);
    const auto w = ScalarField::from_function(g, [](Point p) { return 0.25 * (p.x * p.x + p.y * p.y); });
    const auto& lat = unit_disc_lattice();
    for (double rho : {4 * g.h(), 16 * g.h(), 0.5}) {
        const BlowupSample s = rescale(w, o, rho);
        double err = 0.0;
        for (std::size_t k = 0; k < lat.size(); ++k)
            err = std::max(err, std::abs(s.values[k] - 0.25 * (lat[k].x * lat[k].x + lat[k].y * lat[k].y)));
        CHECK(err < 0.01);
    }
    // A cubic correction shrinks linearly with the scale.
    const auto c = ScalarField::from_function(g, [](Point p) { return 0.5 * p.x * p.x + p.x * p.x * p.x; });
    auto deviation = [&](double rho) {
        const BlowupSample s = rescale(c, o, rho);
        double d = 0.0;
        for (std::size_t k = 0; k < lat.size(); ++k) d = std::max(d, std::abs(s.values[k] - 0.5 * lat[k].x * lat[k].x));
        return d;
    };
    CHECK(deviation(0.4) / deviation(0.2) == doctest::Approx(2.0).epsilon(0.1));
}

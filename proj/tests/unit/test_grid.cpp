#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "mvset/error.hpp"
#include "mvset/grid.hpp"

using namespace mvset;

TEST_CASE("grid geometry") {
    const Grid g = testing::box(9);
    CHECK(g.h() == doctest::Approx(0.25));
    CHECK(g.size() == 81u);
    CHECK(g.coord(0, 0) == Point{-1.0, -1.0});
    CHECK(g.coord(8, 8) == Point{1.0, 1.0});
    CHECK(g.coord(4, 2).y == doctest::Approx(-0.5));
    CHECK(g.index(3, 2) == 2u * 9u + 3u);
    CHECK(g.node_of(g.index(5, 7)) == Node{5, 7});
    CHECK(g.boundary_distance({4, 4}) == 4);
    CHECK(g.boundary_distance({1, 6}) == 1);
    CHECK(g.nearest_node({0.1, -0.12}) == Node{4, 4});
    CHECK(g.nearest_node({5.0, -5.0}) == Node{8, 0});
}

TEST_CASE("make_grid rejects bad extents") {
    CHECK_THROWS_AS(make_grid({0, 0}, {1, 1}, 2), PreconditionError);
    CHECK_THROWS_AS(make_grid({0, 0}, {0, 1}, 9), PreconditionError);
    CHECK_THROWS_AS(make_grid({0, 0}, {2, 1}, 9), PreconditionError);
}

TEST_CASE("ball node counts") {
    const Grid g = testing::box(65);
    const Point c = g.coord(32, 32);
    const double h = g.h();
    // Open balls: 1.2h holds the plus, 1.5h the 3x3 block.
    CHECK(ball_nodes(g, c, 1.2 * h).count() == 5u);
    CHECK(ball_nodes(g, c, 1.5 * h).count() == 9u);
    CHECK(ball_nodes(g, c, h).count() == 1u);
    CHECK(ball_nodes(g, c, 0.0).count() == 0u);
    CHECK_THROWS_AS(ball_nodes(g, c, -1.0), PreconditionError);

    // The lattice-point count approaches the area.
    const double R = 20.0 * h;
    const double count = static_cast<double>(ball_nodes(g, c, R).count());
    CHECK(std::abs(count * h * h - M_PI * R * R) < 2.0 * M_PI * R * h);
}

TEST_CASE("node set algebra") {
    const Grid g = testing::box(17);
    NodeSet a(g), b(g);
    a.insert(Node{3, 3});
    a.insert(Node{4, 3});
    b.insert(Node{4, 3});
    b.insert(Node{5, 3});
    CHECK(a.united(b).count() == 3u);
    CHECK(a.intersected(b).count() == 1u);
    CHECK(a.minus(b).count() == 1u);
    CHECK(a.complement().count() == g.size() - 2u);
    CHECK(a.intersected(b).subset_of(a));
    CHECK_FALSE(a.subset_of(b));
    CHECK(dilate(a, 0.0) == a);
    CHECK(dilate(a, 1.5 * g.h()).count() == 12u);
    CHECK(boundary_nodes(g).count() == 4u * 16u);
    CHECK_THROWS_AS(a.united(NodeSet(testing::box(9))), PreconditionError);
}

TEST_CASE("bilinear sampling is exact for bilinear functions") {
    const Grid g = testing::box(33);
    const auto f = ScalarField::from_function(g, [](Point p) { return 1.0 + 2.0 * p.x - p.y + 0.5 * p.x * p.y; });
    for (Point p : {Point{0.013, -0.77}, Point{0.5, 0.5}, Point{-1.0, 1.0}, Point{0.9999, 0.3}})
        CHECK(f.sample(p) == doctest::Approx(1.0 + 2.0 * p.x - p.y + 0.5 * p.x * p.y).epsilon(1e-12));
    CHECK_THROWS_AS(f.sample({1.1, 0.0}), GeometryError);
    CHECK(f.max() == doctest::Approx(1.0 + 2.0 + 1.0 + 0.5 * -1.0));
    CHECK(f.all_finite());
}

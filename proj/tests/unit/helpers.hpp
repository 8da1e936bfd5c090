#pragma once

#include <cmath>

#include "mvset/grid.hpp"
#include "mvset/obstacle.hpp"

namespace testing {

inline mvset::Grid box(int n) { return mvset::make_grid({-1.0, -1.0}, {1.0, 1.0}, n); }

inline mvset::Node origin(const mvset::Grid& g) { return g.nearest_node({0.0, 0.0}); }

/// Every node except the outer ring.
inline mvset::NodeSet interior(const mvset::Grid& g) {
    mvset::NodeSet s(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (!g.on_boundary(g.node_of(k))) s.insert(k);
    return s;
}

inline double max_abs_diff(const mvset::ScalarField& a, const mvset::ScalarField& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

}  // namespace testing

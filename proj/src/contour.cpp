#include "mvset/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace mvset {

namespace {

// Edge ids: 2 * index(i, j) for the horizontal edge (i,j)-(i+1,j),
// 2 * index(i, j) + 1 for the vertical edge (i,j)-(i,j+1).
using EdgeId = std::size_t;

Point edge_midpoint(const Grid& g, EdgeId e) {
    const Node n = g.node_of(e / 2);
    const Point p = g.coord(n);
    const double half = 0.5 * g.h();
    return (e % 2 == 0) ? Point{p.x + half, p.y} : Point{p.x, p.y + half};
}

double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }

double segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    double t = len2 > 0.0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

template <class F>
void for_each_segment(const Contour& c, F&& f) {
    for (std::size_t l = 0; l < c.loops.size(); ++l) {
        const auto& loop = c.loops[l];
        if (loop.size() == 1) f(loop[0], loop[0]);
        for (std::size_t v = 0; v + 1 < loop.size(); ++v) f(loop[v], loop[v + 1]);
        if (c.closed[l] && loop.size() > 2) f(loop.back(), loop.front());
    }
}

}  // namespace

double Contour::signed_area() const {
    double a = 0.0;
    for (std::size_t l = 0; l < loops.size(); ++l) {
        if (!closed[l]) continue;
        const auto& loop = loops[l];
        for (std::size_t v = 0; v < loop.size(); ++v) a += cross(loop[v], loop[(v + 1) % loop.size()]);
    }
    return 0.5 * a;
}

double Contour::perimeter() const {
    double p = 0.0;
    for_each_segment(*this, [&](Point a, Point b) { p += norm(b - a); });
    return p;
}

std::size_t Contour::vertex_count() const {
    std::size_t n = 0;
    for (const auto& l : loops) n += l.size();
    return n;
}

Contour trace_boundary(const NodeSet& s) {
    const Grid& g = s.grid();
    const int n = g.n_side();
    std::map<EdgeId, EdgeId> next;
    std::map<EdgeId, int> incoming;

    auto add = [&](EdgeId from, EdgeId to) {
        next[from] = to;
        incoming[to] += 1;
    };

    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            const Node c[4] = {{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}};
            const bool in[4] = {s.contains(c[0]), s.contains(c[1]), s.contains(c[2]), s.contains(c[3])};
            // Edge k joins corner k and corner k+1.
            const EdgeId e[4] = {2 * g.index(i, j), 2 * g.index(i + 1, j) + 1, 2 * g.index(i, j + 1),
                                 2 * g.index(i, j) + 1};
            std::vector<int> crossing;
            for (int k = 0; k < 4; ++k)
                if (in[k] != in[(k + 1) % 4]) crossing.push_back(k);
            if (crossing.empty()) continue;

            auto orient = [&](int ea, int eb, Point inside) {
                const Point pa = edge_midpoint(g, e[ea]);
                const Point pb = edge_midpoint(g, e[eb]);
                if (cross(pb - pa, inside - pa) > 0.0) add(e[ea], e[eb]);
                else add(e[eb], e[ea]);
            };

            if (crossing.size() == 2) {
                int member = 0;
                while (!in[member]) ++member;
                orient(crossing[0], crossing[1], g.coord(c[member]));
            } else {
                // Saddle: cut off each member corner separately.
                for (int k = 0; k < 4; ++k) {
                    if (!in[k]) continue;
                    orient((k + 3) % 4, k, g.coord(c[k]));
                }
            }
        }
    }

    Contour out;
    std::map<EdgeId, bool> used;
    auto walk = [&](EdgeId start, bool closed_expected) {
        Polyline line;
        EdgeId cur = start;
        bool closed = false;
        for (;;) {
            line.push_back(edge_midpoint(g, cur));
            used[cur] = true;
            auto it = next.find(cur);
            if (it == next.end()) break;
            cur = it->second;
            if (cur == start) {
                closed = true;
                break;
            }
            if (used[cur]) break;
        }
        (void)closed_expected;
        out.loops.push_back(std::move(line));
        out.closed.push_back(closed);
    };
    // Open chains first (they start where nothing comes in), then loops.
    for (const auto& [from, to] : next) {
        (void)to;
        if (!used[from] && incoming.find(from) == incoming.end()) walk(from, false);
    }
    for (const auto& [from, to] : next) {
        (void)to;
        if (!used[from]) walk(from, true);
    }
    return out;
}

double distance_to_contour(const Contour& c, Point p) {
    double best = std::numeric_limits<double>::infinity();
    for_each_segment(c, [&](Point a, Point b) { best = std::min(best, segment_distance(p, a, b)); });
    return best;
}

double contour_distance(const Contour& a, const Contour& b) {
    double best = std::numeric_limits<double>::infinity();
    // Segments do not cross for nested sets, so vertex-to-segment distances suffice.
    for (const auto& loop : a.loops)
        for (const Point& p : loop) best = std::min(best, distance_to_contour(b, p));
    for (const auto& loop : b.loops)
        for (const Point& p : loop) best = std::min(best, distance_to_contour(a, p));
    return best;
}

}  // namespace mvset

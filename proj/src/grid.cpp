#include "mvset/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mvset/error.hpp"

namespace mvset {

double norm(Point p) { return std::hypot(p.x, p.y); }

Grid::Grid(Point lo, Point hi, int n_side)
    : lo_(lo), hi_(hi), n_(n_side), h_((hi.x - lo.x) / (n_side - 1)) {}

Node Grid::nearest_node(Point p) const {
    auto clamp_index = [this](double t) {
        const long k = std::lround(t);
        return static_cast<int>(std::clamp<long>(k, 0, n_ - 1));
    };
    return {clamp_index((p.x - lo_.x) / h_), clamp_index((p.y - lo_.y) / h_)};
}

int Grid::boundary_distance(Node n) const {
    return std::min({n.i, n.j, n_ - 1 - n.i, n_ - 1 - n.j});
}

Grid make_grid(Point lo, Point hi, int n_side) {
    if (n_side < 3) {
        std::ostringstream os;
        os << "grid needs n_side >= 3, got " << n_side;
        throw PreconditionError(os.str());
    }
    const double wx = hi.x - lo.x;
    const double wy = hi.y - lo.y;
    if (!(wx > 0.0) || !(wy > 0.0)) throw PreconditionError("grid extent is degenerate");
    if (std::abs(wx - wy) > 1e-12 * std::max(wx, wy))
        throw PreconditionError("grid must be square (equal extents in x and y)");
    return Grid(lo, hi, n_side);
}

// --- ScalarField ----------------------------------------------------------

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw PreconditionError("scalar field value count does not match grid");
}

ScalarField ScalarField::from_function(const Grid& grid, const std::function<double(Point)>& f) {
    ScalarField out(grid);
    for (int j = 0; j < grid.n_side(); ++j)
        for (int i = 0; i < grid.n_side(); ++i) out.at(i, j) = f(grid.coord(i, j));
    return out;
}

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }
double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::sample(Point p) const {
    const double h = grid_.h();
    const int n = grid_.n_side();
    const double s = (p.x - grid_.lo().x) / h;
    const double t = (p.y - grid_.lo().y) / h;
    constexpr double slack = 1e-9;
    if (s < -slack || t < -slack || s > n - 1 + slack || t > n - 1 + slack) {
        std::ostringstream os;
        os << "sample point (" << p.x << ", " << p.y << ") outside the grid";
        throw GeometryError(os.str());
    }
    const int i = std::clamp(static_cast<int>(std::floor(s)), 0, n - 2);
    const int j = std::clamp(static_cast<int>(std::floor(t)), 0, n - 2);
    const double fx = std::clamp(s - i, 0.0, 1.0);
    const double fy = std::clamp(t - j, 0.0, 1.0);
    return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) +
           (1 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1);
}

// --- NodeSet --------------------------------------------------------------

NodeSet::NodeSet(const Grid& grid) : grid_(grid), bits_(grid.size(), 0) {}

std::size_t NodeSet::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> NodeSet::members() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < bits_.size(); ++k)
        if (bits_[k]) out.push_back(k);
    return out;
}

void NodeSet::require_same_grid(const NodeSet& other) const {
    if (!(grid_ == other.grid_)) throw PreconditionError("node sets live on different grids");
}

NodeSet NodeSet::united(const NodeSet& other) const {
    require_same_grid(other);
    NodeSet out(grid_);
    for (std::size_t k = 0; k < bits_.size(); ++k) out.bits_[k] = bits_[k] | other.bits_[k];
    return out;
}

NodeSet NodeSet::intersected(const NodeSet& other) const {
    require_same_grid(other);
    NodeSet out(grid_);
    for (std::size_t k = 0; k < bits_.size(); ++k) out.bits_[k] = bits_[k] & other.bits_[k];
    return out;
}

NodeSet NodeSet::minus(const NodeSet& other) const {
    require_same_grid(other);
    NodeSet out(grid_);
    for (std::size_t k = 0; k < bits_.size(); ++k) out.bits_[k] = bits_[k] & ~other.bits_[k] & 1u;
    return out;
}

NodeSet NodeSet::complement() const {
    NodeSet out(grid_);
    for (std::size_t k = 0; k < bits_.size(); ++k) out.bits_[k] = bits_[k] ? 0 : 1;
    return out;
}

bool NodeSet::subset_of(const NodeSet& other) const {
    require_same_grid(other);
    for (std::size_t k = 0; k < bits_.size(); ++k)
        if (bits_[k] && !other.bits_[k]) return false;
    return true;
}

// --- geometric queries ----------------------------------------------------

namespace {

// Insert every node strictly inside the open disc of `radius` around `center`.
void insert_ball(NodeSet& out, Point center, double radius) {
    const Grid& g = out.grid();
    if (!(radius > 0.0)) return;
    const double h = g.h();
    const int n = g.n_side();
    const int i0 = std::max(0, static_cast<int>(std::floor((center.x - radius - g.lo().x) / h)));
    const int i1 = std::min(n - 1, static_cast<int>(std::ceil((center.x + radius - g.lo().x) / h)));
    const int j0 = std::max(0, static_cast<int>(std::floor((center.y - radius - g.lo().y) / h)));
    const int j1 = std::min(n - 1, static_cast<int>(std::ceil((center.y + radius - g.lo().y) / h)));
    const double r2 = radius * radius;
    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            const Point d = g.coord(i, j) - center;
            if (d.x * d.x + d.y * d.y < r2) out.insert(g.index(i, j));
        }
    }
}

}  // namespace

NodeSet ball_nodes(const Grid& grid, Point center, double radius) {
    if (radius < 0.0) throw PreconditionError("ball radius must be nonnegative");
    NodeSet out(grid);
    insert_ball(out, center, radius);
    return out;
}

NodeSet dilate(const NodeSet& s, double delta) {
    if (delta < 0.0) throw PreconditionError("dilation radius must be nonnegative");
    const Grid& g = s.grid();
    NodeSet out = s;
    if (delta == 0.0) return out;
    for (std::size_t k : s.members()) insert_ball(out, g.coord(g.node_of(k)), delta);
    return out;
}

NodeSet boundary_nodes(const Grid& grid) {
    NodeSet out(grid);
    for (int j = 0; j < grid.n_side(); ++j)
        for (int i = 0; i < grid.n_side(); ++i)
            if (grid.on_boundary(i, j)) out.insert(grid.index(i, j));
    return out;
}

}  // namespace mvset

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mvset {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
double norm(Point p);

/// Integer node coordinates; i runs along x, j along y.
struct Node {
    int i = 0;
    int j = 0;

    friend bool operator==(const Node&, const Node&) = default;
};

/// Uniform node-centred square grid. Node (i, j) sits at lo + (i h, j h).
class Grid {
public:
    Grid(Point lo, Point hi, int n_side);

    Point lo() const { return lo_; }
    Point hi() const { return hi_; }
    int n_side() const { return n_; }
    double h() const { return h_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
    std::size_t index(Node n) const { return index(n.i, n.j); }
    Node node_of(std::size_t k) const {
        return {static_cast<int>(k % n_), static_cast<int>(k / n_)};
    }
    Point coord(int i, int j) const { return {lo_.x + i * h_, lo_.y + j * h_}; }
    Point coord(Node n) const { return coord(n.i, n.j); }

    bool contains(Node n) const { return n.i >= 0 && n.j >= 0 && n.i < n_ && n.j < n_; }
    bool on_boundary(int i, int j) const { return i == 0 || j == 0 || i == n_ - 1 || j == n_ - 1; }
    bool on_boundary(Node n) const { return on_boundary(n.i, n.j); }

    /// Nearest node to p, clamped into the grid.
    Node nearest_node(Point p) const;
    /// Number of grid steps between n and the nearest boundary row/column.
    int boundary_distance(Node n) const;

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.n_ == b.n_ && a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }

private:
    Point lo_;
    Point hi_;
    int n_;
    double h_;
};

/// Validating factory: n_side >= 3, hi > lo componentwise, square extent.
Grid make_grid(Point lo, Point hi, int n_side);

/// One real per node.
class ScalarField {
public:
    explicit ScalarField(const Grid& grid, double fill = 0.0);
    ScalarField(const Grid& grid, std::vector<double> values);

    static ScalarField from_function(const Grid& grid, const std::function<double(Point)>& f);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    double at(int i, int j) const { return values_[grid_.index(i, j)]; }
    double& at(int i, int j) { return values_[grid_.index(i, j)]; }
    double at(Node n) const { return at(n.i, n.j); }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double max() const;
    double min() const;
    double max_abs() const;
    bool all_finite() const;

    /// Bilinear interpolation; throws GeometryError outside the grid.
    double sample(Point p) const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Membership bitmask over the nodes of a grid.
class NodeSet {
public:
    explicit NodeSet(const Grid& grid);

    const Grid& grid() const { return grid_; }

    bool contains(std::size_t k) const { return bits_[k] != 0; }
    bool contains(Node n) const { return grid_.contains(n) && bits_[grid_.index(n)] != 0; }
    void insert(std::size_t k) { bits_[k] = 1; }
    void insert(Node n) { bits_[grid_.index(n)] = 1; }
    void erase(std::size_t k) { bits_[k] = 0; }

    std::size_t count() const;
    bool empty() const { return count() == 0; }
    std::vector<std::size_t> members() const;

    NodeSet united(const NodeSet& other) const;
    NodeSet intersected(const NodeSet& other) const;
    NodeSet minus(const NodeSet& other) const;
    NodeSet complement() const;
    bool subset_of(const NodeSet& other) const;

    friend bool operator==(const NodeSet& a, const NodeSet& b) {
        return a.grid_ == b.grid_ && a.bits_ == b.bits_;
    }

private:
    void require_same_grid(const NodeSet& other) const;

    Grid grid_;
    std::vector<std::uint8_t> bits_;
};

/// Nodes with Euclidean distance to center strictly less than radius.
NodeSet ball_nodes(const Grid& grid, Point center, double radius);

/// Union of ball_nodes(member, delta) over all members; dilate(s, 0) == s.
NodeSet dilate(const NodeSet& s, double delta);

/// Nodes on the outer row/column of the grid.
NodeSet boundary_nodes(const Grid& grid);

}  // namespace mvset

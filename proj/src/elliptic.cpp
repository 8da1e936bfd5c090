#include "mvset/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mvset/error.hpp"

namespace mvset {

namespace {

// Eigenvalues of [[a, b], [b, c]] in ascending order.
std::pair<double, double> sym_eigenvalues(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    return {mean - rad, mean + rad};
}

void require_common_grid(const ScalarField& a, const ScalarField& b, const ScalarField& c) {
    if (!(a.grid() == b.grid()) || !(a.grid() == c.grid()))
        throw PreconditionError("tensor components must share one grid");
}

std::string describe_node(const Grid& g, std::size_t k) {
    const Node n = g.node_of(k);
    const Point p = g.coord(n);
    std::ostringstream os;
    os << "node " << k << " (i=" << n.i << ", j=" << n.j << ", x=" << p.x << ", y=" << p.y << ")";
    return os.str();
}

}  // namespace

// --- CoefficientField ----------------------------------------------------

CoefficientField::CoefficientField(ScalarField a11, ScalarField a12, ScalarField a22)
    : a11_(std::move(a11)), a12_(std::move(a12)), a22_(std::move(a22)), degenerate_node_(0) {
    require_common_grid(a11_, a12_, a22_);
    bounds_.lambda = std::numeric_limits<double>::infinity();
    bounds_.Lambda = -std::numeric_limits<double>::infinity();
    degenerate_node_ = a11_.size();
    for (std::size_t k = 0; k < a11_.size(); ++k) {
        const auto [lo, hi] = sym_eigenvalues(a11_[k], a12_[k], a22_[k]);
        if (!(lo > 0.0) && degenerate_node_ == a11_.size()) degenerate_node_ = k;
        bounds_.lambda = std::min(bounds_.lambda, lo);
        bounds_.Lambda = std::max(bounds_.Lambda, hi);
    }
}

CoefficientField CoefficientField::identity(const Grid& grid) { return constant(grid, 1.0, 0.0, 1.0); }

CoefficientField CoefficientField::constant(const Grid& grid, double a11, double a12, double a22) {
    return {ScalarField(grid, a11), ScalarField(grid, a12), ScalarField(grid, a22)};
}

EllipticityBounds check_ellipticity(const CoefficientField& c) {
    if (c.first_degenerate_node() != c.a11().size())
        throw PreconditionError("coefficients are not uniformly elliptic at " +
                                describe_node(c.grid(), c.first_degenerate_node()));
    return c.bounds();
}

// --- ChartMetric ---------------------------------------------------------

ChartMetric::ChartMetric(ScalarField g11, ScalarField g12, ScalarField g22)
    : g11_(std::move(g11)), g12_(std::move(g12)), g22_(std::move(g22)) {
    require_common_grid(g11_, g12_, g22_);
}

ChartMetric ChartMetric::flat(const Grid& grid) {
    return {ScalarField(grid, 1.0), ScalarField(grid, 0.0), ScalarField(grid, 1.0)};
}

double ChartMetric::weight(std::size_t k) const { return std::sqrt(det(k)); }

std::array<double, 3> ChartMetric::inverse(std::size_t k) const {
    const double d = det(k);
    return {g22_[k] / d, -g12_[k] / d, g11_[k] / d};
}

// --- StencilOperator -----------------------------------------------------

StencilOperator::StencilOperator(const Grid& grid, std::vector<Row> rows, std::vector<double> rho,
                                 std::string label)
    : grid_(grid), rows_(std::move(rows)), rho_(std::move(rho)), dirichlet_(boundary_nodes(grid)),
      label_(std::move(label)) {
    if (rows_.size() != grid_.size() || rho_.size() != grid_.size())
        throw PreconditionError("stencil storage does not match grid");
}

double StencilOperator::apply_row(const ScalarField& u, std::size_t k) const {
    const Node n = grid_.node_of(k);
    const Row& w = rows_[k];
    double acc = 0.0;
    for (int s = 0; s < 9; ++s) {
        if (w[s] == 0.0) continue;
        acc += w[s] * u.at(n.i + offset_i(s), n.j + offset_j(s));
    }
    return acc;
}

ScalarField StencilOperator::apply(const ScalarField& u) const {
    if (!(u.grid() == grid_)) throw PreconditionError("field and operator grids differ");
    ScalarField out(grid_);
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        if (dirichlet_.contains(k)) continue;
        out[k] = apply_row(u, k) / rho_[k];
    }
    return out;
}

bool StencilOperator::has_m_matrix_signs() const {
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        if (dirichlet_.contains(k)) continue;
        for (int s = 0; s < 9; ++s)
            if (s != center && rows_[k][s] < 0.0) return false;
    }
    return true;
}

double StencilOperator::symmetry_defect() const {
    double worst = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
        if (dirichlet_.contains(k)) continue;
        scale = std::max(scale, std::abs(rows_[k][center]));
        const Node n = grid_.node_of(k);
        for (int s = 0; s < 9; ++s) {
            if (s == center) continue;
            const Node m{n.i + offset_i(s), n.j + offset_j(s)};
            const std::size_t l = grid_.index(m);
            if (dirichlet_.contains(l)) continue;
            const double mirror = rows_[l][8 - s];
            worst = std::max(worst, std::abs(rows_[k][s] - mirror));
        }
    }
    return scale > 0.0 ? worst / scale : worst;
}

// --- assembly ------------------------------------------------------------

namespace {

StencilOperator assemble_weighted(const ScalarField& a11, const ScalarField& a12, const ScalarField& a22,
                                  std::vector<double> rho, const Grid& grid, std::string label) {
    if (!(a11.grid() == grid)) throw PreconditionError("coefficient grid differs from assembly grid");
    const int n = grid.n_side();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    std::vector<StencilOperator::Row> rows(grid.size(), StencilOperator::Row{});
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const std::size_t k = grid.index(i, j);
            auto& w = rows[k];
            if (grid.on_boundary(i, j)) {
                w[StencilOperator::center] = 1.0;
                continue;
            }
            const double east = 0.5 * (a11.at(i, j) + a11.at(i + 1, j));
            const double west = 0.5 * (a11.at(i, j) + a11.at(i - 1, j));
            const double north = 0.5 * (a22.at(i, j) + a22.at(i, j + 1));
            const double south = 0.5 * (a22.at(i, j) + a22.at(i, j - 1));
            // slots: 0 SW, 1 S, 2 SE, 3 W, 4 C, 5 E, 6 NW, 7 N, 8 NE
            w[5] = east * inv_h2;
            w[3] = west * inv_h2;
            w[7] = north * inv_h2;
            w[1] = south * inv_h2;
            w[4] = -(east + west + north + south) * inv_h2;
            // D_x(a12 D_y u) + D_y(a12 D_x u), centred differences.
            const double q = 0.25 * inv_h2;
            w[8] = q * (a12.at(i + 1, j) + a12.at(i, j + 1));
            w[0] = q * (a12.at(i - 1, j) + a12.at(i, j - 1));
            w[6] = -q * (a12.at(i - 1, j) + a12.at(i, j + 1));
            w[2] = -q * (a12.at(i + 1, j) + a12.at(i, j - 1));
        }
    }
    return StencilOperator(grid, std::move(rows), std::move(rho), std::move(label));
}

}  // namespace

StencilOperator assemble_divergence(const CoefficientField& c, const Grid& grid) {
    check_ellipticity(c);
    return assemble_weighted(c.a11(), c.a12(), c.a22(), std::vector<double>(grid.size(), 1.0), grid,
                             "divergence");
}

StencilOperator assemble_beltrami(const ChartMetric& m, const Grid& grid) {
    if (!(m.grid() == grid)) throw PreconditionError("metric grid differs from assembly grid");
    ScalarField b11(grid), b12(grid), b22(grid);
    std::vector<double> rho(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (!(m.det(k) > 0.0))
            throw PreconditionError("metric is degenerate (det g <= 0) at " + describe_node(grid, k));
        const double r = m.weight(k);
        const auto inv = m.inverse(k);
        rho[k] = r;
        b11[k] = r * inv[0];
        b12[k] = r * inv[1];
        b22[k] = r * inv[2];
    }
    check_ellipticity(CoefficientField(b11, b12, b22));
    return assemble_weighted(b11, b12, b22, std::move(rho), grid, "beltrami");
}

StencilOperator assemble_laplacian(const Grid& grid) {
    return assemble_divergence(CoefficientField::identity(grid), grid);
}

double boundary_flux(const StencilOperator& op, const ScalarField& u) {
    const Grid& g = op.grid();
    const double h2 = g.h() * g.h();
    double flux = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (op.is_dirichlet(k)) continue;
        const Node n = g.node_of(k);
        const auto& w = op.row(k);
        for (int s = 0; s < 9; ++s) {
            if (s == StencilOperator::center || w[s] == 0.0) continue;
            const Node m{n.i + StencilOperator::offset_i(s), n.j + StencilOperator::offset_j(s)};
            if (!g.on_boundary(m)) continue;
            flux += w[s] * (u.at(m) - u[k]) * h2;
        }
    }
    return flux;
}

}  // namespace mvset

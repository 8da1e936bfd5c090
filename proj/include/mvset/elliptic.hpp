#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "mvset/grid.hpp"

namespace mvset {

struct EllipticityBounds {
    double lambda = 0.0;  ///< smallest nodal eigenvalue
    double Lambda = 0.0;  ///< largest nodal eigenvalue
};

/// Symmetric coefficient matrix field a^{ij}(x); a12 stores both off-diagonals.
class CoefficientField {
public:
    CoefficientField(ScalarField a11, ScalarField a12, ScalarField a22);

    static CoefficientField identity(const Grid& grid);
    static CoefficientField constant(const Grid& grid, double a11, double a12, double a22);

    const Grid& grid() const { return a11_.grid(); }
    const ScalarField& a11() const { return a11_; }
    const ScalarField& a12() const { return a12_; }
    const ScalarField& a22() const { return a22_; }

    /// Cached global eigenvalue range; lambda may be <= 0 for invalid input.
    EllipticityBounds bounds() const { return bounds_; }
    /// First node where the smallest eigenvalue is <= 0, or size() if none.
    std::size_t first_degenerate_node() const { return degenerate_node_; }

private:
    ScalarField a11_;
    ScalarField a12_;
    ScalarField a22_;
    EllipticityBounds bounds_;
    std::size_t degenerate_node_;
};

/// Returns (lambda, Lambda); throws PreconditionError naming the first
/// non-elliptic node.
EllipticityBounds check_ellipticity(const CoefficientField& c);

/// Metric tensor g_{ij} in a chart.
class ChartMetric {
public:
    ChartMetric(ScalarField g11, ScalarField g12, ScalarField g22);

    static ChartMetric flat(const Grid& grid);

    const Grid& grid() const { return g11_.grid(); }
    const ScalarField& g11() const { return g11_; }
    const ScalarField& g12() const { return g12_; }
    const ScalarField& g22() const { return g22_; }

    double det(std::size_t k) const { return g11_[k] * g22_[k] - g12_[k] * g12_[k]; }
    /// sqrt(det g); only meaningful when det > 0.
    double weight(std::size_t k) const;
    /// Inverse metric (g^{11}, g^{12}, g^{22}) at node k.
    std::array<double, 3> inverse(std::size_t k) const;

private:
    ScalarField g11_;
    ScalarField g12_;
    ScalarField g22_;
};

/// Nine-point stencil operator. Stored rows are the assembled form
/// A = D_i(rho a^{ij} D_j); the pointwise operator is L = A / rho.
/// Stencil slot s encodes the offset (s % 3 - 1, s / 3 - 1).
class StencilOperator {
public:
    using Row = std::array<double, 9>;
    static constexpr int center = 4;
    static constexpr int offset_i(int s) { return s % 3 - 1; }
    static constexpr int offset_j(int s) { return s / 3 - 1; }

    StencilOperator(const Grid& grid, std::vector<Row> rows, std::vector<double> rho, std::string label);

    const Grid& grid() const { return grid_; }
    const Row& row(std::size_t k) const { return rows_[k]; }
    double rho(std::size_t k) const { return rho_[k]; }
    const std::vector<double>& rho() const { return rho_; }
    const NodeSet& dirichlet_mask() const { return dirichlet_; }
    bool is_dirichlet(std::size_t k) const { return dirichlet_.contains(k); }
    const std::string& label() const { return label_; }

    /// Pointwise L u at interior nodes; Dirichlet rows report 0.
    ScalarField apply(const ScalarField& u) const;
    /// (A u)_k for one interior node.
    double apply_row(const ScalarField& u, std::size_t k) const;

    /// True when every interior off-diagonal weight is >= 0 (-A is then an M-matrix).
    bool has_m_matrix_signs() const;
    /// Largest |A_kl - A_lk| over interior pairs, relative to the largest diagonal.
    double symmetry_defect() const;

private:
    Grid grid_;
    std::vector<Row> rows_;
    std::vector<double> rho_;
    NodeSet dirichlet_;
    std::string label_;
};

/// Flux-form discretisation of L = D_j a^{ij} D_i with midpoint-averaged
/// coefficients; Dirichlet identity rows on the grid boundary.
StencilOperator assemble_divergence(const CoefficientField& c, const Grid& grid);

/// Weighted divergence form D_i(rho_g g^{ij} D_j) with node weight rho_g = sqrt(det g);
/// dividing by rho_g gives the Laplace-Beltrami operator in the chart.
StencilOperator assemble_beltrami(const ChartMetric& m, const Grid& grid);

StencilOperator assemble_laplacian(const Grid& grid);

/// Sum over interior nodes i and boundary neighbours b of A_ib (u_b - u_i) h^2:
/// the discrete flux of A u leaving through the box boundary.
double boundary_flux(const StencilOperator& op, const ScalarField& u);

}  // namespace mvset

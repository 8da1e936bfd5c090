#pragma once

// Compact storage of M = -A restricted to a set of unknown nodes; nodes
// outside the set are fixed and folded into the right-hand side.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mvset/elliptic.hpp"

namespace mvset::detail {

struct CompactSystem {
    std::vector<std::size_t> nodes;  // grid indices, ascending
    std::vector<double> diag;        // M_pp
    std::vector<int> row_ptr;        // CSR over unknown neighbours
    std::vector<int> col;
    std::vector<double> val;         // M_pq
    std::vector<double> fixed;       // -sum_fixed M_pl x_l = sum_fixed A_pl x_l

    std::size_t size() const { return nodes.size(); }

    /// y = M_UU x (compact vectors).
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    /// (M_UU x)_p for a single row.
    double row_product(const std::vector<double>& x, std::size_t p) const;
};

/// Builds the restriction to nodes where mask[k] != 0 (Dirichlet rows are
/// never unknowns). x_full supplies the values of fixed nodes.
CompactSystem build_compact(const StencilOperator& op, const std::vector<std::uint8_t>& mask,
                            const std::vector<double>& x_full);

struct CgStats {
    int iterations = 0;
    double residual_norm = 0.0;  // ||b - M x||_2 at exit
    double rhs_norm = 0.0;       // ||b||_2
    bool converged = false;
};

/// Jacobi-preconditioned CG for M_UU x = b; x holds the initial guess.
/// Stops when ||r|| <= max(rel_tol ||b||, abs_tol).
CgStats solve_cg(const CompactSystem& sys, const std::vector<double>& b, std::vector<double>& x,
                 double rel_tol, double abs_tol, int max_iterations);

}  // namespace mvset::detail

#include "detail/compact_system.hpp"

#include <cmath>

namespace mvset::detail {

void CompactSystem::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    y.resize(nodes.size());
    for (std::size_t p = 0; p < nodes.size(); ++p) y[p] = row_product(x, p);
}

double CompactSystem::row_product(const std::vector<double>& x, std::size_t p) const {
    double acc = diag[p] * x[p];
    for (int e = row_ptr[p]; e < row_ptr[p + 1]; ++e) acc += val[e] * x[col[e]];
    return acc;
}

CompactSystem build_compact(const StencilOperator& op, const std::vector<std::uint8_t>& mask,
                            const std::vector<double>& x_full) {
    const Grid& g = op.grid();
    CompactSystem sys;
    std::vector<int> slot(g.size(), -1);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!mask[k] || op.is_dirichlet(k)) continue;
        slot[k] = static_cast<int>(sys.nodes.size());
        sys.nodes.push_back(k);
    }
    const std::size_t n = sys.nodes.size();
    sys.diag.resize(n);
    sys.fixed.assign(n, 0.0);
    sys.row_ptr.assign(n + 1, 0);
    sys.col.reserve(8 * n);
    sys.val.reserve(8 * n);
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t k = sys.nodes[p];
        const Node c = g.node_of(k);
        const auto& w = op.row(k);
        sys.diag[p] = -w[StencilOperator::center];
        for (int s = 0; s < 9; ++s) {
            if (s == StencilOperator::center || w[s] == 0.0) continue;
            const std::size_t l =
                g.index(c.i + StencilOperator::offset_i(s), c.j + StencilOperator::offset_j(s));
            if (slot[l] >= 0) {
                sys.col.push_back(slot[l]);
                sys.val.push_back(-w[s]);
            } else {
                sys.fixed[p] += w[s] * x_full[l];
            }
        }
        sys.row_ptr[p + 1] = static_cast<int>(sys.col.size());
    }
    return sys;
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

CgStats solve_cg(const CompactSystem& sys, const std::vector<double>& b, std::vector<double>& x,
                 double rel_tol, double abs_tol, int max_iterations) {
    const std::size_t n = sys.size();
    CgStats stats;
    stats.rhs_norm = std::sqrt(dot(b, b));
    if (n == 0) {
        stats.converged = true;
        return stats;
    }
    const double target = std::max(rel_tol * stats.rhs_norm, abs_tol);

    std::vector<double> r(n), z(n), p(n), q(n);
    int it = 0;
    double true_norm = 0.0;
    // Restart from the current iterate whenever the recurrence residual has
    // converged but the true residual has not.
    for (int restart = 0; restart < 8; ++restart) {
        sys.multiply(x, q);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
        true_norm = std::sqrt(dot(r, r));
        if (true_norm <= target || it >= max_iterations) break;
        for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / sys.diag[i];
        p = z;
        double rz = dot(r, z);
        double rnorm = true_norm;
        while (rnorm > target && it < max_iterations) {
            sys.multiply(p, q);
            const double pq = dot(p, q);
            if (!(pq > 0.0)) break;
            const double alpha = rz / pq;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * p[i];
                r[i] -= alpha * q[i];
            }
            ++it;
            rnorm = std::sqrt(dot(r, r));
            for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / sys.diag[i];
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
    }
    sys.multiply(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
    true_norm = std::sqrt(dot(r, r));
    stats.iterations = it;
    stats.residual_norm = true_norm;
    stats.converged = true_norm <= target;
    return stats;
}

}  // namespace mvset::detail

#include "mvset/obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/compact_system.hpp"
#include "mvset/error.hpp"

namespace mvset {

std::string ObstacleSource::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::generic: os << "generic"; break;
        case Kind::mean_value: os << "mean-value r=" << parameter; break;
        case Kind::shift: os << "shift t=" << parameter; break;
    }
    return os.str();
}

namespace {

double auto_omega(const Grid& g, const std::vector<std::uint8_t>& mask) {
    int i0 = g.n_side(), i1 = -1, j0 = g.n_side(), j1 = -1;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!mask[k]) continue;
        const Node n = g.node_of(k);
        i0 = std::min(i0, n.i);
        i1 = std::max(i1, n.i);
        j0 = std::min(j0, n.j);
        j1 = std::max(j1, n.j);
    }
    if (i1 < 0) return 1.0;
    const int diameter = std::max(i1 - i0, j1 - j0) + 2;
    return 2.0 / (1.0 + std::sin(std::numbers::pi / diameter));
}

struct LcpState {
    detail::CompactSystem sys;
    std::vector<double> b;  // complementarity: M w >= b, q = M w - b
    std::vector<double> w;
};

double psor(LcpState& st, double omega, double tolerance, int max_sweeps, int& sweeps) {
    const auto& sys = st.sys;
    const std::size_t n = sys.size();
    double last_change = 0.0;
    while (sweeps < max_sweeps) {
        double change = 0.0;
        double wmax = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            const double res = st.b[p] - sys.row_product(st.w, p);
            const double updated = std::max(0.0, st.w[p] + omega * res / sys.diag[p]);
            change = std::max(change, std::abs(updated - st.w[p]));
            st.w[p] = updated;
            wmax = std::max(wmax, updated);
        }
        ++sweeps;
        last_change = change;
        if (change <= tolerance * std::max(wmax, 1e-300)) break;
    }
    return last_change;
}

double scale_of(const LcpState& st) {
    double s = 0.0;
    for (std::size_t p = 0; p < st.w.size(); ++p)
        s = std::max({s, st.w[p], std::abs(st.b[p] / st.sys.diag[p])});
    return s > 0.0 ? s : 1.0;
}

std::vector<std::uint8_t> predict_active(const LcpState& st, double eta) {
    const auto& sys = st.sys;
    std::vector<std::uint8_t> active(sys.size(), 0);
    for (std::size_t p = 0; p < sys.size(); ++p) {
        const double q = sys.row_product(st.w, p) - st.b[p];
        active[p] = (st.w[p] - q / sys.diag[p] < eta) ? 1 : 0;
    }
    return active;
}

// Primal-dual active-set iterations. Returns true on a stable active set.
bool refine_active_set(const StencilOperator& op, LcpState& st, int max_rounds, int& rounds,
                       int& cg_iterations) {
    const auto& sys = st.sys;
    const Grid& g = op.grid();
    const std::size_t n = sys.size();
    std::vector<std::uint8_t> active = predict_active(st, 1e-12 * scale_of(st));
    for (int round = 0; round < max_rounds; ++round) {
        ++rounds;
        // Inactive system: unknowns I, with w = 0 on A folded into the rhs (zero contribution).
        std::vector<std::uint8_t> inactive_mask(g.size(), 0);
        std::vector<double> x_full(g.size(), 0.0);
        for (std::size_t p = 0; p < n; ++p) {
            if (!active[p]) inactive_mask[sys.nodes[p]] = 1;
        }
        const auto sub = detail::build_compact(op, inactive_mask, x_full);
        // Map sub rows back to positions in sys (both ascending in grid index).
        std::vector<double> rhs(sub.size()), xi(sub.size());
        {
            std::size_t p = 0;
            for (std::size_t s = 0; s < sub.size(); ++s) {
                while (sys.nodes[p] != sub.nodes[s]) ++p;
                // b already contains the original fixed (Dirichlet) contributions.
                rhs[s] = st.b[p];
                xi[s] = st.w[p];
            }
        }
        const int cap = 20 * static_cast<int>(sub.size()) + 1000;
        const auto cg = detail::solve_cg(sub, rhs, xi, 1e-14, 1e-300, cap);
        cg_iterations += cg.iterations;
        {
            std::size_t s = 0;
            for (std::size_t p = 0; p < n; ++p) {
                if (active[p]) {
                    st.w[p] = 0.0;
                } else {
                    st.w[p] = xi[s++];
                }
            }
        }
        const auto next = predict_active(st, 1e-12 * scale_of(st));
        if (next == active) return true;
        active = next;
    }
    return false;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b)) throw PreconditionError(std::string(what) + ": grids differ");
}

}  // namespace

LcpCertificate certify(const StencilOperator& op, const ScalarField& rhs, const ObstacleSolution& s) {
    const Grid& g = op.grid();
    LcpCertificate c;
    double wmax = 0.0;
    double rhs_max = 0.0;
    double scale_rhs = 0.0;
    c.min_w = 0.0;
    bool first = true;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!s.domain.contains(k)) continue;
        const double diag = -op.row(k)[StencilOperator::center];
        wmax = std::max(wmax, s.w[k]);
        rhs_max = std::max(rhs_max, std::abs(rhs[k]));
        scale_rhs = std::max(scale_rhs, std::abs(op.rho(k) * rhs[k] / diag));
        c.min_w = first ? s.w[k] : std::min(c.min_w, s.w[k]);
        first = false;
    }
    const double scale = std::max({wmax, scale_rhs, 1e-300});
    const double rhs_scale = rhs_max > 0.0 ? rhs_max : 1.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!s.domain.contains(k)) continue;
        const double diag = -op.row(k)[StencilOperator::center];
        const double q = op.rho(k) * rhs[k] - op.apply_row(s.w, k);
        c.comp_residual = std::max(c.comp_residual, std::abs(std::min(s.w[k], q / diag)) / scale);
        if (s.w[k] > 0.0) c.pde_residual = std::max(c.pde_residual, std::abs(q / op.rho(k)) / rhs_scale);
    }
    return c;
}

ObstacleSolution solve_lcp(const StencilOperator& op, const ScalarField& rhs, const ScalarField& bc,
                           const NodeSet& domain, const LcpOptions& options) {
    const Grid& g = op.grid();
    require_same_grid(g, rhs.grid(), "solve_lcp");
    require_same_grid(g, bc.grid(), "solve_lcp");
    require_same_grid(g, domain.grid(), "solve_lcp");

    std::vector<std::uint8_t> mask(g.size(), 0);
    NodeSet unknowns(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (domain.contains(k) && !op.is_dirichlet(k)) {
            mask[k] = 1;
            unknowns.insert(k);
        }
    }
    // Dirichlet data must be admissible wherever the stencil reaches outside the unknowns.
    for (std::size_t k : unknowns.members()) {
        const Node c = g.node_of(k);
        for (int s = 0; s < 9; ++s) {
            const std::size_t l = g.index(c.i + StencilOperator::offset_i(s), c.j + StencilOperator::offset_j(s));
            if (!mask[l] && bc[l] < 0.0) {
                std::ostringstream os;
                os << "obstacle boundary data is negative (" << bc[l] << ") at node " << l;
                throw PreconditionError(os.str());
            }
        }
    }

    std::vector<double> x_full = bc.values();
    for (std::size_t k = 0; k < g.size(); ++k)
        if (mask[k]) x_full[k] = 0.0;

    LcpState st{detail::build_compact(op, mask, x_full), {}, {}};
    const std::size_t n = st.sys.size();
    st.b.resize(n);
    st.w.assign(n, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        const std::size_t k = st.sys.nodes[p];
        st.b[p] = st.sys.fixed[p] - op.rho(k) * rhs[k];
        if (options.initial) {
            require_same_grid(g, options.initial->grid(), "solve_lcp initial guess");
            st.w[p] = std::max(0.0, (*options.initial)[k]);
        }
    }

    ObstacleSolution out{ScalarField(g), unknowns, NodeSet(g), {}, 0.0, 0.0, 0, 0, 0, 0.0, {}};
    out.omega = options.omega > 0.0 ? options.omega : auto_omega(g, mask);
    if (!(out.omega > 0.0 && out.omega < 2.0)) throw PreconditionError("relaxation factor must lie in (0, 2)");
    if (!op.has_m_matrix_signs())
        out.warnings.push_back("-L has positive off-diagonal stencil weights (not an M-matrix)");

    const int max_sweeps = options.max_sweeps > 0 ? options.max_sweeps : 200 * g.n_side();
    double tolerance = options.psor_tolerance;
    bool certified = false;
    for (;;) {
        psor(st, out.omega, tolerance, max_sweeps, out.sweeps);
        const bool stable = refine_active_set(op, st, options.max_refinements, out.refinements, out.cg_iterations);
        if (stable) {
            out.w = bc;
            for (std::size_t p = 0; p < n; ++p) out.w[st.sys.nodes[p]] = st.w[p];
            const auto cert = certify(op, rhs, out);
            out.comp_residual = cert.comp_residual;
            out.pde_residual = cert.pde_residual;
            if (cert.min_w >= 0.0 && cert.comp_residual <= options.comp_tolerance &&
                cert.pde_residual <= options.pde_tolerance) {
                certified = true;
                break;
            }
        }
        for (double& v : st.w) v = std::max(v, 0.0);
        if (out.sweeps >= max_sweeps) break;
        tolerance *= 1e-2;
    }
    if (!certified) {
        std::ostringstream os;
        os << "obstacle solver failed to certify after " << out.sweeps << " sweeps and " << out.refinements
           << " refinements (complementarity residual " << out.comp_residual << ", PDE residual "
           << out.pde_residual << ")";
        throw SolverError(os.str());
    }
    for (std::size_t k : unknowns.members())
        if (out.w[k] == 0.0) out.active.insert(k);
    return out;
}

// --- mean value formulation ----------------------------------------------

namespace {

ScalarField mean_value_rhs(const StencilOperator& op, Node pole, double r) {
    const Grid& g = op.grid();
    ScalarField rhs(g, 1.0 / (r * r));
    const ScalarField delta = discrete_delta(op, pole);
    for (std::size_t k = 0; k < g.size(); ++k) rhs[k] -= delta[k];
    return rhs;
}

}  // namespace

LcpOptions mean_value_options(const StencilOperator& op, const GreenFunction& green, double r,
                              InitialGuess guess) {
    LcpOptions opts;
    if (guess == InitialGuess::zero) return opts;
    const Grid& g = op.grid();
    const ScalarField torsion = solve_linear(op, ScalarField(g, 1.0), ScalarField(g));
    ScalarField w0(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        w0[k] = std::max(0.0, green.field[k] - torsion[k] / (r * r));
    opts.initial = std::move(w0);
    return opts;
}

ObstacleSolution solve_mean_value(const StencilOperator& op, const GreenFunction& green, double r,
                                  const LcpOptions& options) {
    const Grid& g = op.grid();
    require_same_grid(g, green.field.grid(), "solve_mean_value");
    if (!(r > 0.0)) throw PreconditionError("mean value radius must be positive");
    const double min_r = 2.0 * g.h() * std::sqrt(std::numbers::pi);
    if (r < min_r) {
        std::ostringstream os;
        os << "radius " << r << " is below the resolution bound 2h sqrt(pi) = " << min_r
           << "; refine the grid";
        throw PreconditionError(os.str());
    }
    NodeSet all(g);
    for (std::size_t k = 0; k < g.size(); ++k) all.insert(k);
    ObstacleSolution s = solve_lcp(op, mean_value_rhs(op, green.pole, r), ScalarField(g), all, options);
    s.source = {ObstacleSource::Kind::mean_value, r};
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (s.w[k] > 0.0 && g.boundary_distance(g.node_of(k)) < 4) {
            std::ostringstream os;
            os << "box too small: the mean value set for r=" << r
               << " reaches within 4h of the boundary; enlarge the box or shrink r";
            throw GeometryError(os.str());
        }
    }
    return s;
}

ObstacleSolution solve_classical(const StencilOperator& op, const ScalarField& data, const LcpOptions& options) {
    const Grid& g = op.grid();
    require_same_grid(g, data.grid(), "solve_classical");
    NodeSet interior(g);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (!g.on_boundary(g.node_of(k))) interior.insert(k);
    return solve_lcp(op, ScalarField(g, 1.0), data, interior, options);
}

// --- shifted boundary data -----------------------------------------------

NodeSet ShiftBoundaryProblem::disk() const {
    const Grid& g = base.grid();
    return ball_nodes(g, g.coord(origin), radius);
}

NodeSet ShiftBoundaryProblem::rim() const {
    const Grid& g = base.grid();
    const NodeSet d = disk();
    NodeSet out(g);
    for (std::size_t k : d.members()) {
        const Node c = g.node_of(k);
        for (int s = 0; s < 9; ++s) {
            const Node m{c.i + StencilOperator::offset_i(s), c.j + StencilOperator::offset_j(s)};
            if (g.contains(m) && !d.contains(m)) out.insert(m);
        }
    }
    return out;
}

ScalarField ShiftBoundaryProblem::boundary_data() const {
    ScalarField data(base.grid());
    for (std::size_t k = 0; k < data.size(); ++k) data[k] = std::max(0.0, base[k] + shift);
    return data;
}

ObstacleSolution solve_shift(const StencilOperator& laplacian, const ShiftBoundaryProblem& problem,
                             const LcpOptions& options) {
    const Grid& g = problem.base.grid();
    require_same_grid(g, laplacian.grid(), "solve_shift");
    if (2.0 * problem.radius / g.h() < 32.0) {
        std::ostringstream os;
        os << "shift disc of radius " << problem.radius << " spans fewer than 32 nodes; refine the grid";
        throw PreconditionError(os.str());
    }
    if (!g.contains(problem.origin) ||
        g.boundary_distance(problem.origin) * g.h() < problem.radius + 2.0 * g.h()) {
        throw GeometryError("shift disc plus a 2h margin does not fit inside the grid");
    }
    ObstacleSolution s = solve_lcp(laplacian, ScalarField(g, 1.0), problem.boundary_data(), problem.disk(), options);
    s.source = {ObstacleSource::Kind::shift, problem.shift};
    return s;
}

// --- comparison ----------------------------------------------------------

ComparisonReport comparison_check(const ObstacleSolution& s1, const ObstacleSolution& s2, double eps) {
    require_same_grid(s1.w.grid(), s2.w.grid(), "comparison_check");
    ComparisonReport rep;
    const double scale = std::max({s1.w.max_abs(), s2.w.max_abs(), 1e-300});
    rep.slack = 10.0 * std::max(s1.comp_residual, s2.comp_residual) * scale + 1e-13 * scale;
    for (std::size_t k = 0; k < s1.w.size(); ++k) {
        const double d = s2.w[k] - s1.w[k];
        rep.sup_difference = std::max(rep.sup_difference, std::abs(d));
        rep.lower_violation = std::max(rep.lower_violation, -d - rep.slack);
        rep.upper_violation = std::max(rep.upper_violation, d - eps - rep.slack);
    }
    return rep;
}

}  // namespace mvset

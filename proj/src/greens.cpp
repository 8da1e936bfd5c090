#include "mvset/greens.hpp"

#include <sstream>

#include "detail/compact_system.hpp"
#include "mvset/error.hpp"

namespace mvset {

ScalarField solve_linear(const StencilOperator& op, const ScalarField& rhs, const ScalarField& bc,
                         LinearSolveStats* stats, double tolerance) {
    const Grid& g = op.grid();
    if (!(rhs.grid() == g) || !(bc.grid() == g)) throw PreconditionError("solve_linear: grids differ");

    std::vector<double> x = bc.values();
    // Interior values start at zero; only boundary values of bc are used.
    std::vector<std::uint8_t> mask(g.size(), 0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (op.is_dirichlet(k)) continue;
        mask[k] = 1;
        x[k] = 0.0;
    }
    const auto sys = detail::build_compact(op, mask, x);
    std::vector<double> b(sys.size());
    std::vector<double> xu(sys.size(), 0.0);
    for (std::size_t p = 0; p < sys.size(); ++p) {
        const std::size_t k = sys.nodes[p];
        b[p] = op.rho(k) * rhs[k] + sys.fixed[p];
    }
    const int cap = 40 * static_cast<int>(g.size()) + 1000;
    const auto cg = detail::solve_cg(sys, b, xu, 1e-2 * tolerance, 1e-300, cap);
    const double rel = cg.rhs_norm > 0.0 ? cg.residual_norm / cg.rhs_norm : cg.residual_norm;
    if (rel > tolerance) {
        std::ostringstream os;
        os << "conjugate gradient did not converge: relative residual " << rel << " after "
           << cg.iterations << " iterations";
        throw SolverError(os.str());
    }
    ScalarField u(g, std::move(x));
    for (std::size_t p = 0; p < sys.size(); ++p) u[sys.nodes[p]] = xu[p];
    if (stats) *stats = {cg.iterations, rel};
    return u;
}

ScalarField discrete_delta(const StencilOperator& op, Node pole) {
    const Grid& g = op.grid();
    ScalarField d(g);
    const std::size_t k = g.index(pole);
    d[k] = 1.0 / (op.rho(k) * g.h() * g.h());
    return d;
}

GreenFunction compute_green(const StencilOperator& op, Node x0) {
    const Grid& g = op.grid();
    if (!g.contains(x0) || g.boundary_distance(x0) < 4) {
        std::ostringstream os;
        os << "pole (" << x0.i << ", " << x0.j << ") lies within 4h of the box boundary";
        throw GeometryError(os.str());
    }
    LinearSolveStats stats;
    ScalarField field = solve_linear(op, discrete_delta(op, x0), ScalarField(g), &stats);
    return {std::move(field), x0, stats};
}

}  // namespace mvset

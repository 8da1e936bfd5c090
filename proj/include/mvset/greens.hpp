#pragma once

#include "mvset/elliptic.hpp"
#include "mvset/grid.hpp"

namespace mvset {

struct LinearSolveStats {
    int iterations = 0;
    double relative_residual = 0.0;  ///< ||b - M u||_2 / ||b||_2 over the interior unknowns
};

/// Solves -L u = rhs at interior nodes with u = bc on the Dirichlet boundary.
/// rhs is pointwise (it is multiplied by the node weight before the solve).
/// Throws SolverError if the relative residual does not reach `tolerance`.
ScalarField solve_linear(const StencilOperator& op, const ScalarField& rhs, const ScalarField& bc,
                         LinearSolveStats* stats = nullptr, double tolerance = 1e-10);

/// Discrete G(., x0) with -L G = delta_{x0} and zero boundary data. The delta
/// has unit mass in the weighted quadrature: sum rho * delta * h^2 = 1.
struct GreenFunction {
    ScalarField field;
    Node pole;
    LinearSolveStats stats;
};

/// Pole must sit at least 4 grid steps from the boundary (GeometryError otherwise).
GreenFunction compute_green(const StencilOperator& op, Node x0);

/// Pointwise discrete delta at `pole`: 1 / (rho(pole) h^2) there, zero elsewhere.
ScalarField discrete_delta(const StencilOperator& op, Node pole);

}  // namespace mvset

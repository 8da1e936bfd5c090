#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mvset/elliptic.hpp"
#include "mvset/greens.hpp"
#include "mvset/grid.hpp"

namespace mvset {

/// What the obstacle solve represents.
struct ObstacleSource {
    enum class Kind { generic, mean_value, shift };
    Kind kind = Kind::generic;
    double parameter = 0.0;  ///< r for mean_value, t for shift
    std::string describe() const;
};

/// Certified solution of the complementarity system
///   w >= 0,   L w <= rhs,   w (L w - rhs) = 0
/// on an unknown node set, with Dirichlet values elsewhere.
struct ObstacleSolution {
    ScalarField w;
    NodeSet domain;   ///< unknown nodes (interior of the solve region)
    NodeSet active;   ///< contact set: unknown nodes with w == 0 exactly
    ObstacleSource source;
    /// max |min(w_k, q_k / M_kk)| / scale with q = rho rhs - A w and scale = max(|w|, |rho rhs / M_kk|).
    double comp_residual = 0.0;
    /// max over {w > 0} of |L w - rhs| / ||rhs||_inf.
    double pde_residual = 0.0;
    int sweeps = 0;        ///< projected SOR sweeps
    int refinements = 0;   ///< active-set solves
    int cg_iterations = 0;
    double omega = 0.0;    ///< relaxation factor used
    std::vector<std::string> warnings;
};

struct LcpOptions {
    /// Relaxation factor; 0 selects 2 / (1 + sin(pi / D)) with D the node diameter of the domain.
    double omega = 0.0;
    /// Sweep cap; 0 selects 200 * n_side.
    int max_sweeps = 0;
    /// Projected SOR stops once the largest update falls below this fraction of max |w|.
    double psor_tolerance = 1e-7;
    /// Active-set refinements per round (solve on the inactive set, verify signs).
    int max_refinements = 5;
    /// Initial guess on the unknowns (clipped at 0); zero when absent.
    std::optional<ScalarField> initial;
    double comp_tolerance = 1e-10;
    double pde_tolerance = 1e-8;
};

/// Solves the LCP for the pointwise forcing `rhs` on `domain` (Dirichlet data `bc`
/// on every other node). Requires bc >= 0 on the nodes adjacent to the domain.
ObstacleSolution solve_lcp(const StencilOperator& op, const ScalarField& rhs, const ScalarField& bc,
                           const NodeSet& domain, const LcpOptions& options = {});

/// Classical obstacle problem L u = chi_{u > 0} on the box interior with u = data on the boundary.
ObstacleSolution solve_classical(const StencilOperator& op, const ScalarField& data, const LcpOptions& options = {});

/// Height function of the mean value obstacle problem:
///   L w = r^{-2} chi_{w > 0} - delta_{x0},  w = 0 on the box boundary.
/// Throws GeometryError if {w > 0} reaches within 4h of the box boundary and
/// PreconditionError if r < 2 h sqrt(pi).
ObstacleSolution solve_mean_value(const StencilOperator& op, const GreenFunction& green, double r,
                                  const LcpOptions& options = {});

/// Initial guesses used for the uniqueness check.
enum class InitialGuess { zero, unconstrained_clipped };
/// Options for a mean value solve started from the given guess. The clipped
/// unconstrained solution is G - r^{-2} psi with -L psi = 1, psi = 0 on the boundary.
LcpOptions mean_value_options(const StencilOperator& op, const GreenFunction& green, double r,
                              InitialGuess guess);

/// Dirichlet data (w + t)^+ on the rim of a disc around the origin node.
struct ShiftBoundaryProblem {
    ScalarField base;   ///< w
    double radius = 0;  ///< disc radius in physical units
    double shift = 0;   ///< t (the rescaled shift is T = t / radius^2)
    Node origin;        ///< centre node

    NodeSet disk() const;
    /// Masked-out nodes within one stencil step of the disc.
    NodeSet rim() const;
    ScalarField boundary_data() const;
};

/// Classical obstacle problem Delta u = chi_{u > 0} in the disc with the
/// shifted data on the rim. `laplacian` must be the Laplacian on base.grid().
ObstacleSolution solve_shift(const StencilOperator& laplacian, const ShiftBoundaryProblem& problem,
                             const LcpOptions& options = {});

struct ComparisonReport {
    double lower_violation = 0.0;  ///< max (w1 - w2 - slack)^+
    double upper_violation = 0.0;  ///< max (w2 - w1 - eps - slack)^+
    double sup_difference = 0.0;   ///< max |w2 - w1|
    double slack = 0.0;
    bool ordered() const { return lower_violation == 0.0 && upper_violation == 0.0; }
};

/// Checks w1 <= w2 <= w1 + eps nodewise up to slack = 10 * max comp residual * scale.
ComparisonReport comparison_check(const ObstacleSolution& s1, const ObstacleSolution& s2, double eps);

/// Residual summary recomputed from scratch (independent of solver bookkeeping).
struct LcpCertificate {
    double comp_residual = 0.0;
    double pde_residual = 0.0;
    double min_w = 0.0;
};
LcpCertificate certify(const StencilOperator& op, const ScalarField& rhs, const ObstacleSolution& s);

}  // namespace mvset

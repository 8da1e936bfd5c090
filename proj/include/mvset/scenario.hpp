#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mvset/elliptic.hpp"
#include "mvset/grid.hpp"

namespace mvset {

/// A named operator: either divergence-form coefficients a^{ij}(x) or a chart metric g_{ij}(x).
struct Scenario {
    enum class Kind { coefficients, metric };

    std::string name;
    std::string description;
    Kind kind = Kind::coefficients;
    /// Returns (t11, t12, t22) of the coefficient or metric tensor at a point.
    std::function<std::array<double, 3>(Point)> tensor;
    /// Suggested Dirichlet data for the classical obstacle problem (may be empty).
    std::string default_data;

    StencilOperator assemble(const Grid& grid) const;
    /// Effective divergence-form coefficients rho a^{ij} at p (for metrics: sqrt(det g) g^{ij}).
    std::array<double, 3> effective_coefficients(Point p) const;
};

const std::vector<Scenario>& builtin_scenarios();
/// Throws ConfigError for unknown names.
const Scenario& find_scenario(const std::string& name);

/// Scenario with expression-defined tensor components.
Scenario inline_scenario(Scenario::Kind kind, const std::string& t11, const std::string& t12,
                         const std::string& t22);

}  // namespace mvset

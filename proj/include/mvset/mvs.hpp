#pragma once

#include <string>
#include <vector>

#include "mvset/contour.hpp"
#include "mvset/elliptic.hpp"
#include "mvset/greens.hpp"
#include "mvset/obstacle.hpp"

namespace mvset {

/// Noncontact set, contact set and free boundary of an obstacle solution.
struct RegionDecomposition {
    NodeSet omega;    ///< domain nodes with w > 0
    NodeSet contact;  ///< domain nodes with w == 0
    NodeSet fb;       ///< contact nodes with a 4-neighbour in omega
    Contour boundary; ///< marching-squares trace of the omega indicator
};

RegionDecomposition extract_regions(const ObstacleSolution& s);

struct NestingReport {
    /// For consecutive radii (i, i+1): how many omega(r_i) nodes are missing from omega(r_{i+1}).
    std::vector<std::size_t> violations;
    bool nested() const;
};

/// Mean value sets D_r(x0) for an increasing list of radii.
struct MvsFamily {
    Node center;
    std::vector<double> radii;
    std::vector<ObstacleSolution> solutions;
    std::vector<RegionDecomposition> regions;
    NestingReport nesting;
    std::vector<double> rho;  ///< quadrature weights of the operator (sqrt det g, or 1)
};

/// Solves every radius and checks omega(r_i) subset omega(r_{i+1}).
/// Radii must be strictly increasing with the smallest >= 4 h sqrt(pi).
MvsFamily build_family(const StencilOperator& op, const GreenFunction& green, const std::vector<double>& radii,
                       const LcpOptions& options = {});

/// Minimum distance between the boundary traces of a and b.
double strict_gap(const RegionDecomposition& a, const RegionDecomposition& b);

struct MeanValueReport {
    double center_value = 0.0;
    std::vector<double> averages;
    /// Largest |avg - v(x0)| (the harmonic case expects this near 0).
    double max_deviation = 0.0;
    /// v(x0) <= avg_1 <= ... <= avg_k after rounding at 1e-12.
    bool chain_holds = true;
    bool strictly_increasing = true;
    /// Largest drop in the chain (0 when it holds).
    double max_violation = 0.0;
    bool subsolution = true;
};

/// Weighted average of v over omega(r) for every member of the family.
MeanValueReport verify_mean_value(const ScalarField& v, const MvsFamily& family, bool subsolution);

/// rho-weighted node average of v over a node set.
double set_average(const ScalarField& v, const NodeSet& set, const std::vector<double>& rho);

struct ConverseEntry {
    Node center;
    double value = 0.0;
    double average = 0.0;
    double residual = 0.0;         ///< |v(center) - average|
    double stencil_residual = 0.0; ///< |L v (center)|
};

/// Mean value defect of v over D_r(c) for each sample centre c.
std::vector<ConverseEntry> converse_check(const ScalarField& v, const StencilOperator& op,
                                          const std::vector<Node>& centers, double r,
                                          const LcpOptions& options = {});

struct BallBounds {
    std::vector<double> inradius_ratio;      ///< per radius: min distance x0 -> boundary / r
    std::vector<double> circumradius_ratio;  ///< per radius: max distance x0 -> boundary / r
    double c_est = 0.0;                      ///< min inradius ratio
    double C_est = 0.0;                      ///< max circumradius ratio
};

/// Throws PreconditionError if any member has an empty noncontact set.
BallBounds ball_bounds(const MvsFamily& family);

struct VolumeEntry {
    double r = 0.0;
    double volume = 0.0;        ///< sum of rho h^2 over omega
    double relative_error = 0.0;  ///< (volume - r^2) / r^2
    /// sum of rho h^2 (L w + delta) r^2 over the domain: the measure the
    /// discrete equation actually integrates, equal to r^2 up to solver residuals.
    double discrete_chi_volume = 0.0;
};

std::vector<VolumeEntry> volume_identity(const MvsFamily& family, const StencilOperator& op);

/// Per-radius JSON report {r, volume, vol_rel_err, inradius_ratio, circumradius_ratio, gap_to_next}.
std::string family_json(const MvsFamily& family, const StencilOperator& op);

}  // namespace mvset

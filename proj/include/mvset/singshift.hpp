#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "mvset/freeboundary.hpp"
#include "mvset/obstacle.hpp"

namespace mvset {

/// Contact status of a node: interior-contact when every node of the open
/// 2h-ball is zero, noncontact when the node itself is positive.
enum class ContactStatus { interior_contact, free_boundary, noncontact };
std::string to_string(ContactStatus s);
/// interior_contact = 2 > free_boundary = 1 > noncontact = 0
int rank(ContactStatus s);

/// Requires the 2h-ball around p inside the solve domain (GeometryError otherwise).
ContactStatus contact_status(const ObstacleSolution& s, Node p);
ContactStatus contact_status(const ScalarField& u, const NodeSet& domain, Node p);

struct ShiftOptions {
    /// Shift problems are solved on the sub-lattice of w whose stride puts
    /// roughly this many nodes across the disc (never fewer than 32).
    int target_nodes_across = 160;
    LcpOptions lcp;
};

/// The sub-lattice of w used for the shift problems at radius r.
struct ShiftLattice {
    ScalarField w;  ///< w restricted to the sub-lattice
    Node origin;    ///< node of the physical origin on the sub-lattice
    int stride = 1;
    double radius = 0.0;

    /// (w + r^2 T)^+ on the rim with Delta u = 1 in the disc.
    ShiftBoundaryProblem problem(double T) const;
    /// max of w(r x) / r^2 over the closed unit disc (sub-lattice nodes).
    double max_rescaled() const;
};

/// Centred on the node nearest (0, 0). Throws GeometryError if the disc and its
/// margin leave the grid.
ShiftLattice make_shift_lattice(const ScalarField& w, double r, const ShiftOptions& options = {});

struct ShiftSearchResult {
    double r = 0.0;
    double S = 0.0;  ///< T-units: the physical shift is t = r^2 S
    int steps = 0;   ///< bisection steps after the two endpoint solves
    std::vector<std::pair<double, double>> brackets;
    ContactStatus status = ContactStatus::free_boundary;
    /// Free-boundary status was squeezed out between adjacent bracket ends.
    bool pinched = false;
    double initial_lo = 0.0;
    double initial_hi = 0.0;
    ObstacleSolution solution;  ///< v at T = S on the sub-lattice
    Node origin;                ///< origin node of solution's grid
};

/// Bisection on T for the transition of the origin to noncontact.
/// Requires w(0) == 0; throws SolverError if the predicate is not monotone.
ShiftSearchResult find_shift(const ScalarField& w, double r, double tol_T, const ShiftOptions& options = {});

struct ScanResult {
    double r = 0.0;
    std::vector<double> T;
    std::vector<ContactStatus> statuses;
    bool monotone = true;
    /// T distance between the last interior-contact and first noncontact entry (0 if either is absent).
    double band_width = 0.0;
    bool single_band = true;
    /// max over consecutive pairs of ||u_{k+1} - u_k||_inf - r^2 (T_{k+1} - T_k), clipped at 0.
    double continuity_excess = 0.0;
    std::vector<std::string> violations;
    bool ok() const { return monotone && single_band && violations.empty(); }
};

/// T_grid must be ascending (PreconditionError otherwise).
ScanResult uniqueness_scan(const ScalarField& w, double r, const std::vector<double>& T_grid,
                           const ShiftOptions& options = {});

/// T_k = lo + (hi - lo) k / (count - 1).
std::vector<double> linear_grid(double lo, double hi, int count);

struct DecayReport {
    std::vector<ShiftSearchResult> results;
    bool envelope_ok = true;   ///< |S_k| <= 2 min_{j <= k} |S_j| + tol_T
    bool final_le_first = true;
};

/// radii must be strictly descending (PreconditionError otherwise).
DecayReport shift_decay(const ScalarField& w, const std::vector<double>& radii, double tol_T,
                        const ShiftOptions& options = {});

struct PreservationEntry {
    double r = 0.0;
    double S = 0.0;
    bool pinched = false;
    BlowupClassification classification;
};

struct PreservationReport {
    int seed_stratum = 0;
    std::vector<PreservationEntry> entries;
    /// Largest r such that every tested radius <= r is classified singular (0 if none).
    double stable_radius = 0.0;
    bool preserved = false;  ///< singular with stratum <= seed at every radius <= stable_radius
    bool all_singular = false;
};

/// Classifies the shifted solution of every search result at its origin.
PreservationReport preservation_report(const std::vector<ShiftSearchResult>& results, int seed_stratum);
PreservationReport preservation_check(const ScalarField& w, const std::vector<double>& radii, double tol_T,
                                      int seed_stratum, const ShiftOptions& options = {});

/// Resamples w(a0^{1/2} y) on the same grid so that the constant-coefficient
/// part at the origin becomes the identity. Points mapped outside the grid are
/// clamped to the nearest boundary point. Identity a0 returns w unchanged.
ScalarField normalize_coordinates(const ScalarField& w, const Sym2& a0);

std::string shift_json(const ShiftSearchResult& r);

}  // namespace mvset

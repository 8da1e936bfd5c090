#pragma once

#include <array>
#include <string>
#include <vector>

#include "mvset/grid.hpp"

namespace mvset {

/// Symmetric 2x2 matrix [[m11, m12], [m12, m22]].
struct Sym2 {
    double m11 = 0.0;
    double m12 = 0.0;
    double m22 = 0.0;

    double trace() const { return m11 + m22; }
    /// Eigenvalues in ascending order.
    std::array<double, 2> eigenvalues() const;
    /// Unit eigenvector for the larger eigenvalue.
    Point principal_axis() const;
    /// Nearest positive semidefinite matrix (negative eigenvalues clipped to 0).
    Sym2 psd_projection() const;
    double quadratic(Point x) const { return 0.5 * (m11 * x.x * x.x + 2.0 * m12 * x.x * x.y + m22 * x.y * x.y); }
    /// R M R^T for the rotation by angle theta.
    Sym2 rotated(double theta) const;
};

/// Fixed sampling lattice: the 33 x 33 grid on [-1, 1]^2 restricted to the closed unit disc.
const std::vector<Point>& unit_disc_lattice();

/// w(q + rho x) / rho^2 sampled at the lattice points.
struct BlowupSample {
    Node q;
    double rho = 0.0;
    std::vector<double> values;  ///< aligned with unit_disc_lattice()
};

/// Requires rho >= 4h and the closed ball B_rho(q) inside the grid (GeometryError otherwise).
BlowupSample rescale(const ScalarField& w, Node q, double rho);

inline double halfspace_profile(Point x, Point n) {
    const double s = x.x * n.x + x.y * n.y;
    return s > 0.0 ? 0.5 * s * s : 0.0;
}

enum class Verdict { regular, singular, indeterminate };
std::string to_string(Verdict v);

struct ScaleFit {
    double rho = 0.0;
    double halfspace_residual = 0.0;  ///< RMS misfit of the best 1/2 max(x.n, 0)^2
    double quadratic_residual = 0.0;  ///< RMS misfit of the projected 1/2 x^T M x
    Point normal;
    Sym2 M;
    Verdict verdict = Verdict::indeterminate;
};

/// Fits both models to one rescaled sample.
ScaleFit fit_models(const BlowupSample& sample);

struct BlowupClassification {
    Node q;
    Point position;
    Verdict verdict = Verdict::indeterminate;
    Point normal;   ///< regular case
    Sym2 M;         ///< singular case
    std::array<double, 2> eigenvalues{};
    int stratum = -1;    ///< eigenvalues below 0.05 * max (singular case)
    double gamma = 0.0;  ///< separation margin of M (singular case)
    std::vector<ScaleFit> scales;  ///< coarse to fine: 16h, 8h, 4h
};

/// Blow-up classification at a free boundary node q (w(q) == 0 with a positive 4-neighbour).
/// Throws PreconditionError if q is not on the free boundary.
BlowupClassification classify(const ScalarField& w, Node q);

/// min over unit normals n of max over the lattice |1/2 x^T M x - 1/2 max(x.n, 0)^2|.
double separation(const Sym2& M);

struct NondegeneracyConstants {
    double C1 = 0.0;  ///< max over deltas of sup_{B_delta} w / delta^2
    double C2 = 0.0;  ///< min over deltas of sup_{B_delta} |grad_h w| / delta
};

/// Requires q on the free boundary and every delta in [4h, dist(q, grid edge)).
NondegeneracyConstants nondegeneracy(const ScalarField& w, Node q, const std::vector<double>& deltas);

bool on_free_boundary(const ScalarField& w, Node q);

std::string classification_json(const BlowupClassification& c);

}  // namespace mvset

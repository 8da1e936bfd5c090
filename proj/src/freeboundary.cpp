#include "mvset/freeboundary.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "mvset/error.hpp"

namespace mvset {

namespace {

constexpr int kAngles = 720;
constexpr double kStratumFraction = 0.05;

Point unit(double theta) { return {std::cos(theta), std::sin(theta)}; }

// Golden-section minimisation of f on [a, b].
double golden_min(const std::function<double(double)>& f, double a, double b, int iterations = 60) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < iterations; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? c : d;
}

// Scan the angular grid, then refine within one grid step of the best angle.
double minimise_angle(const std::function<double(double)>& f) {
    const double step = 2.0 * std::numbers::pi / kAngles;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int k = 0; k < kAngles; ++k) {
        const double v = f(k * step);
        if (v < best_val) {
            best_val = v;
            best = k;
        }
    }
    const double theta = golden_min(f, (best - 1) * step, (best + 1) * step);
    return f(theta) < best_val ? theta : best * step;
}

double rms_halfspace(const BlowupSample& s, Point n) {
    const auto& lat = unit_disc_lattice();
    double acc = 0.0;
    for (std::size_t p = 0; p < lat.size(); ++p) {
        const double d = s.values[p] - halfspace_profile(lat[p], n);
        acc += d * d;
    }
    return std::sqrt(acc / lat.size());
}

double rms_quadratic(const BlowupSample& s, const Sym2& M) {
    const auto& lat = unit_disc_lattice();
    double acc = 0.0;
    for (std::size_t p = 0; p < lat.size(); ++p) {
        const double d = s.values[p] - M.quadratic(lat[p]);
        acc += d * d;
    }
    return std::sqrt(acc / lat.size());
}

// Least squares for v ~ m11 x^2/2 + m12 x y + m22 y^2/2.
Sym2 fit_quadratic(const BlowupSample& s) {
    const auto& lat = unit_disc_lattice();
    double A[3][3] = {};
    double b[3] = {};
    for (std::size_t p = 0; p < lat.size(); ++p) {
        const Point x = lat[p];
        const double phi[3] = {0.5 * x.x * x.x, x.x * x.y, 0.5 * x.y * x.y};
        for (int r = 0; r < 3; ++r) {
            b[r] += phi[r] * s.values[p];
            for (int c = 0; c < 3; ++c) A[r][c] += phi[r] * phi[c];
        }
    }
    // Gaussian elimination with partial pivoting on the 3x3 normal equations.
    int perm[3] = {0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[perm[r]][col]) > std::abs(A[perm[piv]][col])) piv = r;
        std::swap(perm[col], perm[piv]);
        for (int r = col + 1; r < 3; ++r) {
            const double f = A[perm[r]][col] / A[perm[col]][col];
            for (int c = col; c < 3; ++c) A[perm[r]][c] -= f * A[perm[col]][c];
            b[perm[r]] -= f * b[perm[col]];
        }
    }
    double m[3];
    for (int r = 2; r >= 0; --r) {
        double acc = b[perm[r]];
        for (int c = r + 1; c < 3; ++c) acc -= A[perm[r]][c] * m[c];
        m[r] = acc / A[perm[r]][r];
    }
    return {m[0], m[1], m[2]};
}

Verdict decide(double halfspace, double quadratic) {
    if (quadratic <= 0.5 * halfspace && halfspace > 0.0) return Verdict::singular;
    if (halfspace <= 0.5 * quadratic && quadratic > 0.0) return Verdict::regular;
    return Verdict::indeterminate;
}

double grad_norm(const ScalarField& w, int i, int j) {
    const double h = w.grid().h();
    const double gx = (w.at(i + 1, j) - w.at(i - 1, j)) / (2.0 * h);
    const double gy = (w.at(i, j + 1) - w.at(i, j - 1)) / (2.0 * h);
    return std::hypot(gx, gy);
}

void require_free_boundary(const ScalarField& w, Node q) {
    if (!on_free_boundary(w, q)) {
        std::ostringstream os;
        os << "node (" << q.i << ", " << q.j << ") is not a free boundary point";
        throw PreconditionError(os.str());
    }
}

}  // namespace

std::array<double, 2> Sym2::eigenvalues() const {
    const double mean = 0.5 * (m11 + m22);
    const double rad = std::hypot(0.5 * (m11 - m22), m12);
    return {mean - rad, mean + rad};
}

Point Sym2::principal_axis() const {
    const double theta = 0.5 * std::atan2(2.0 * m12, m11 - m22);
    return unit(theta);
}

Sym2 Sym2::psd_projection() const {
    const auto ev = eigenvalues();
    if (ev[0] >= 0.0) return *this;
    const double lmax = std::max(ev[1], 0.0);
    const Point v = principal_axis();
    return {lmax * v.x * v.x, lmax * v.x * v.y, lmax * v.y * v.y};
}

Sym2 Sym2::rotated(double theta) const {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // R M R^T with R = [[c, -s], [s, c]].
    const double a = c * m11 - s * m12;
    const double b = c * m12 - s * m22;
    const double d = s * m11 + c * m12;
    const double e = s * m12 + c * m22;
    return {a * c - b * s, a * s + b * c, d * s + e * c};
}

const std::vector<Point>& unit_disc_lattice() {
    static const std::vector<Point> lattice = [] {
        std::vector<Point> pts;
        for (int j = 0; j < 33; ++j) {
            for (int i = 0; i < 33; ++i) {
                const Point p{-1.0 + i / 16.0, -1.0 + j / 16.0};
                if (p.x * p.x + p.y * p.y <= 1.0 + 1e-12) pts.push_back(p);
            }
        }
        return pts;
    }();
    return lattice;
}

BlowupSample rescale(const ScalarField& w, Node q, double rho) {
    const Grid& g = w.grid();
    if (!g.contains(q)) throw GeometryError("blow-up centre outside the grid");
    if (rho < 4.0 * g.h() * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "blow-up scale " << rho << " is below 4h = " << 4.0 * g.h();
        throw PreconditionError(os.str());
    }
    const Point c = g.coord(q);
    const double slack = 1e-12 * (g.hi().x - g.lo().x);
    if (c.x - rho < g.lo().x - slack || c.x + rho > g.hi().x + slack || c.y - rho < g.lo().y - slack ||
        c.y + rho > g.hi().y + slack) {
        std::ostringstream os;
        os << "ball of radius " << rho << " around (" << c.x << ", " << c.y << ") leaves the grid";
        throw GeometryError(os.str());
    }
    BlowupSample s{q, rho, {}};
    const auto& lat = unit_disc_lattice();
    s.values.reserve(lat.size());
    const double inv = 1.0 / (rho * rho);
    for (const Point& x : lat) {
        Point p = c + rho * x;
        p.x = std::clamp(p.x, g.lo().x, g.hi().x);
        p.y = std::clamp(p.y, g.lo().y, g.hi().y);
        s.values.push_back(w.sample(p) * inv);
    }
    return s;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::regular: return "regular";
        case Verdict::singular: return "singular";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "indeterminate";
}

ScaleFit fit_models(const BlowupSample& sample) {
    ScaleFit f;
    f.rho = sample.rho;
    const double theta = minimise_angle([&](double t) { return rms_halfspace(sample, unit(t)); });
    f.normal = unit(theta);
    f.halfspace_residual = rms_halfspace(sample, f.normal);
    f.M = fit_quadratic(sample).psd_projection();
    f.quadratic_residual = rms_quadratic(sample, f.M);
    f.verdict = decide(f.halfspace_residual, f.quadratic_residual);
    return f;
}

bool on_free_boundary(const ScalarField& w, Node q) {
    const Grid& g = w.grid();
    if (!g.contains(q) || g.on_boundary(q) || w.at(q) != 0.0) return false;
    constexpr int dx[4] = {1, -1, 0, 0};
    constexpr int dy[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d)
        if (w.at(q.i + dx[d], q.j + dy[d]) > 0.0) return true;
    return false;
}

BlowupClassification classify(const ScalarField& w, Node q) {
    require_free_boundary(w, q);
    const double h = w.grid().h();
    BlowupClassification c;
    c.q = q;
    c.position = w.grid().coord(q);
    for (double mult : {16.0, 8.0, 4.0}) c.scales.push_back(fit_models(rescale(w, q, mult * h)));

    const ScaleFit& fine = c.scales[2];
    const ScaleFit& mid = c.scales[1];
    c.verdict = fine.verdict == mid.verdict ? fine.verdict : Verdict::indeterminate;
    c.normal = fine.normal;
    c.M = fine.M;
    c.eigenvalues = fine.M.eigenvalues();
    if (c.verdict == Verdict::singular) {
        const double lmax = c.eigenvalues[1];
        c.stratum = 0;
        for (double ev : c.eigenvalues)
            if (ev < kStratumFraction * lmax) ++c.stratum;
        c.gamma = separation(c.M);
    }
    return c;
}

double separation(const Sym2& M) {
    const auto& lat = unit_disc_lattice();
    auto gap = [&](double t) {
        const Point n = unit(t);
        double worst = 0.0;
        for (const Point& x : lat) worst = std::max(worst, std::abs(M.quadratic(x) - halfspace_profile(x, n)));
        return worst;
    };
    return gap(minimise_angle(gap));
}

NondegeneracyConstants nondegeneracy(const ScalarField& w, Node q, const std::vector<double>& deltas) {
    require_free_boundary(w, q);
    const Grid& g = w.grid();
    const double h = g.h();
    const double reach = g.boundary_distance(q) * h;
    if (deltas.empty()) throw PreconditionError("nondegeneracy needs at least one radius");
    NondegeneracyConstants out;
    out.C1 = 0.0;
    out.C2 = std::numeric_limits<double>::infinity();
    const Point c = g.coord(q);
    for (double delta : deltas) {
        if (delta < 4.0 * h * (1.0 - 1e-12) || !(delta < reach)) {
            std::ostringstream os;
            os << "radius " << delta << " outside [4h, " << reach << ")";
            throw PreconditionError(os.str());
        }
        double sup_w = 0.0;
        double sup_grad = 0.0;
        for (std::size_t k : ball_nodes(g, c, delta).members()) {
            const Node n = g.node_of(k);
            sup_w = std::max(sup_w, w[k]);
            if (!g.on_boundary(n)) sup_grad = std::max(sup_grad, grad_norm(w, n.i, n.j));
        }
        out.C1 = std::max(out.C1, sup_w / (delta * delta));
        out.C2 = std::min(out.C2, sup_grad / delta);
    }
    return out;
}

std::string classification_json(const BlowupClassification& c) {
    nlohmann::ordered_json j;
    j["q"] = {c.position.x, c.position.y};
    j["node"] = {c.q.i, c.q.j};
    j["verdict"] = to_string(c.verdict);
    if (c.verdict == Verdict::regular) j["n0"] = {c.normal.x, c.normal.y};
    if (c.verdict == Verdict::singular) {
        j["M"] = {c.M.m11, c.M.m12, c.M.m22};
        j["eigenvalues"] = {c.eigenvalues[0], c.eigenvalues[1]};
        j["trace"] = c.M.trace();
        j["stratum"] = c.stratum;
        j["gamma_est"] = c.gamma;
    }
    nlohmann::ordered_json scales = nlohmann::ordered_json::array();
    for (const auto& s : c.scales) {
        nlohmann::ordered_json e;
        e["rho"] = s.rho;
        e["halfspace_residual"] = s.halfspace_residual;
        e["quadratic_residual"] = s.quadratic_residual;
        e["verdict"] = to_string(s.verdict);
        e["normal"] = {s.normal.x, s.normal.y};
        e["M"] = {s.M.m11, s.M.m12, s.M.m22};
        scales.push_back(std::move(e));
    }
    j["residuals"] = std::move(scales);
    return j.dump(2) + "\n";
}

}  // namespace mvset

#include "mvset/singshift.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "mvset/error.hpp"

namespace mvset {

std::string to_string(ContactStatus s) {
    switch (s) {
        case ContactStatus::interior_contact: return "interior-contact";
        case ContactStatus::free_boundary: return "free-boundary";
        case ContactStatus::noncontact: return "noncontact";
    }
    return "free-boundary";
}

int rank(ContactStatus s) {
    switch (s) {
        case ContactStatus::interior_contact: return 2;
        case ContactStatus::free_boundary: return 1;
        case ContactStatus::noncontact: return 0;
    }
    return 1;
}

ContactStatus contact_status(const ScalarField& u, const NodeSet& domain, Node p) {
    const Grid& g = u.grid();
    // The open 2h-ball holds exactly the 3x3 block; 1.5h keeps rounding away from its edge.
    const NodeSet ball = ball_nodes(g, g.coord(p), 1.5 * g.h());
    if (!g.contains(p) || ball.count() != 9 || !ball.subset_of(domain)) {
        std::ostringstream os;
        os << "node (" << p.i << ", " << p.j << ") lacks a 2h margin inside the solve domain";
        throw GeometryError(os.str());
    }
    if (u.at(p) > 0.0) return ContactStatus::noncontact;
    for (std::size_t k : ball.members())
        if (u[k] != 0.0) return ContactStatus::free_boundary;
    return ContactStatus::interior_contact;
}

ContactStatus contact_status(const ObstacleSolution& s, Node p) { return contact_status(s.w, s.domain, p); }

// --- sub-lattice ---------------------------------------------------------

ShiftBoundaryProblem ShiftLattice::problem(double T) const {
    return {w, radius, T * radius * radius, origin};
}

double ShiftLattice::max_rescaled() const {
    const Grid& g = w.grid();
    const Point c = g.coord(origin);
    double m = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (norm(g.coord(g.node_of(k)) - c) <= radius * (1.0 + 1e-12)) m = std::max(m, w[k]);
    }
    return m / (radius * radius);
}

ShiftLattice make_shift_lattice(const ScalarField& w, double r, const ShiftOptions& options) {
    const Grid& g = w.grid();
    if (!(r > 0.0)) throw PreconditionError("shift radius must be positive");
    const double across = 2.0 * r / g.h();
    if (across < 32.0) {
        std::ostringstream os;
        os << "disc of radius " << r << " spans " << across << " nodes; at least 32 are needed";
        throw PreconditionError(os.str());
    }
    int stride = std::max(1, static_cast<int>(std::ceil(across / std::max(options.target_nodes_across, 32))));
    while (stride > 1 && across / stride < 32.0) --stride;
    const double hs = stride * g.h();
    const int half = static_cast<int>(std::ceil(r / hs - 1e-9)) + 3;
    const Node o = g.nearest_node({0.0, 0.0});
    const int reach = stride * half;
    if (o.i - reach < 0 || o.j - reach < 0 || o.i + reach > g.n_side() - 1 || o.j + reach > g.n_side() - 1) {
        std::ostringstream os;
        os << "disc of radius " << r << " with its margin leaves the grid";
        throw GeometryError(os.str());
    }
    const int n = 2 * half + 1;
    const Grid sub(g.coord(o.i - reach, o.j - reach), g.coord(o.i + reach, o.j + reach), n);
    ScalarField ws(sub);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) ws.at(i, j) = w.at(o.i - reach + stride * i, o.j - reach + stride * j);
    return {std::move(ws), Node{half, half}, stride, r};
}

// --- bisection -----------------------------------------------------------

namespace {

struct Evaluation {
    ObstacleSolution solution;
    ContactStatus status;
};

Evaluation evaluate(const StencilOperator& lap, const ShiftLattice& lat, double T, const ShiftOptions& options,
                    const ObstacleSolution* warm) {
    LcpOptions opts = options.lcp;
    if (warm) opts.initial = warm->w;
    ObstacleSolution s = solve_shift(lap, lat.problem(T), opts);
    const ContactStatus st = contact_status(s, lat.origin);
    return {std::move(s), st};
}

void require_ordered(const ObstacleSolution& lower, const ObstacleSolution& upper, double T1, double T2, double r) {
    const ComparisonReport rep = comparison_check(lower, upper, (T2 - T1) * r * r);
    const double scale = std::max({lower.w.max_abs(), upper.w.max_abs(), 1e-300});
    if (rep.lower_violation > 1e-9 * scale || rep.upper_violation > 1e-9 * scale) {
        std::ostringstream os;
        os << "shift solutions at T=" << T1 << " and T=" << T2 << " violate the comparison ordering";
        throw SolverError(os.str());
    }
}

}  // namespace

ShiftSearchResult find_shift(const ScalarField& w, double r, double tol_T, const ShiftOptions& options) {
    if (!(tol_T > 0.0)) throw PreconditionError("tol_T must be positive");
    const ShiftLattice lat = make_shift_lattice(w, r, options);
    if (lat.w.at(lat.origin) != 0.0) throw PreconditionError("w does not vanish at the origin");
    if (lat.w.min() < 0.0) throw PreconditionError("w takes negative values");
    const StencilOperator lap = assemble_laplacian(lat.w.grid());

    double lo = -lat.max_rescaled() - 1.0;
    double hi = 1.0 / (2.0 * 2.0) + 1.0;
    const double initial_lo = lo;
    const double initial_hi = hi;
    std::vector<std::pair<double, double>> brackets{{lo, hi}};
    int steps = 0;

    Evaluation e_lo = evaluate(lap, lat, lo, options, nullptr);
    Evaluation e_hi = evaluate(lap, lat, hi, options, &e_lo.solution);
    if (e_lo.status == ContactStatus::noncontact || e_hi.status != ContactStatus::noncontact) {
        std::ostringstream os;
        os << "contact predicate is not monotone on the bracket: status " << to_string(e_lo.status) << " at T="
           << lo << ", " << to_string(e_hi.status) << " at T=" << hi;
        throw SolverError(os.str());
    }
    while (hi - lo >= tol_T) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        Evaluation e = evaluate(lap, lat, mid, options, &e_lo.solution);
        require_ordered(e_lo.solution, e.solution, lo, mid, r);
        require_ordered(e.solution, e_hi.solution, mid, hi, r);
        ++steps;
        if (e.status == ContactStatus::noncontact) {
            hi = mid;
            e_hi = std::move(e);
        } else {
            lo = mid;
            e_lo = std::move(e);
        }
        brackets.emplace_back(lo, hi);
    }
    const bool pinched = e_lo.status != ContactStatus::free_boundary;
    return ShiftSearchResult{.r = r,
                             .S = pinched ? 0.5 * (lo + hi) : lo,
                             .steps = steps,
                             .brackets = std::move(brackets),
                             .status = e_lo.status,
                             .pinched = pinched,
                             .initial_lo = initial_lo,
                             .initial_hi = initial_hi,
                             .solution = std::move(e_lo.solution),
                             .origin = lat.origin};
}

// --- scans ---------------------------------------------------------------

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 2) throw PreconditionError("grid needs at least two points");
    std::vector<double> t(count);
    for (int k = 0; k < count; ++k) t[k] = lo + (hi - lo) * k / (count - 1);
    return t;
}

ScanResult uniqueness_scan(const ScalarField& w, double r, const std::vector<double>& T_grid,
                           const ShiftOptions& options) {
    for (std::size_t k = 1; k < T_grid.size(); ++k)
        if (!(T_grid[k] > T_grid[k - 1])) throw PreconditionError("T grid must be strictly ascending");
    ScanResult out;
    out.r = r;
    out.T = T_grid;
    if (T_grid.empty()) return out;
    const ShiftLattice lat = make_shift_lattice(w, r, options);
    const StencilOperator lap = assemble_laplacian(lat.w.grid());

    std::optional<ObstacleSolution> prev;
    double max_step = 0.0;
    for (std::size_t k = 0; k < T_grid.size(); ++k) {
        Evaluation e = evaluate(lap, lat, T_grid[k], options, prev ? &*prev : nullptr);
        out.statuses.push_back(e.status);
        if (prev) {
            const double dT = T_grid[k] - T_grid[k - 1];
            max_step = std::max(max_step, dT);
            double sup = 0.0;
            for (std::size_t p = 0; p < e.solution.w.size(); ++p)
                sup = std::max(sup, std::abs(e.solution.w[p] - prev->w[p]));
            const double scale = std::max(e.solution.w.max_abs(), prev->w.max_abs());
            const double excess = sup - r * r * dT - 1e-9 * scale;
            out.continuity_excess = std::max(out.continuity_excess, std::max(0.0, excess));
            if (rank(e.status) > rank(out.statuses[k - 1])) {
                out.monotone = false;
                std::ostringstream os;
                os << "status rises from " << to_string(out.statuses[k - 1]) << " at T=" << T_grid[k - 1] << " to "
                   << to_string(e.status) << " at T=" << T_grid[k];
                out.violations.push_back(os.str());
            }
        }
        prev = std::move(e.solution);
    }
    if (out.continuity_excess > 0.0) {
        std::ostringstream os;
        os << "sup-norm change exceeds r^2 dT by " << out.continuity_excess;
        out.violations.push_back(os.str());
    }

    int fb_runs = 0;
    for (std::size_t k = 0; k < out.statuses.size(); ++k) {
        if (out.statuses[k] == ContactStatus::free_boundary &&
            (k == 0 || out.statuses[k - 1] != ContactStatus::free_boundary))
            ++fb_runs;
    }
    std::ptrdiff_t last_ic = -1;
    std::ptrdiff_t first_nc = -1;
    for (std::size_t k = 0; k < out.statuses.size(); ++k) {
        if (out.statuses[k] == ContactStatus::interior_contact) last_ic = static_cast<std::ptrdiff_t>(k);
        if (out.statuses[k] == ContactStatus::noncontact && first_nc < 0) first_nc = static_cast<std::ptrdiff_t>(k);
    }
    if (last_ic >= 0 && first_nc >= 0) out.band_width = std::abs(T_grid[first_nc] - T_grid[last_ic]);
    out.single_band = out.monotone && fb_runs <= 1 && out.band_width <= 2.0 * max_step * (1.0 + 1e-9);
    if (!out.single_band) {
        std::ostringstream os;
        os << "transition is not a single band of width <= 2 grid steps (width " << out.band_width << ", "
           << fb_runs << " free-boundary runs)";
        out.violations.push_back(os.str());
    }
    return out;
}

DecayReport shift_decay(const ScalarField& w, const std::vector<double>& radii, double tol_T,
                        const ShiftOptions& options) {
    if (radii.empty()) throw PreconditionError("shift decay needs at least one radius");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] < radii[k - 1])) throw PreconditionError("radii must be strictly descending");
    DecayReport rep;
    double envelope = std::numeric_limits<double>::infinity();
    for (double r : radii) {
        rep.results.push_back(find_shift(w, r, tol_T, options));
        const double s = std::abs(rep.results.back().S);
        envelope = std::min(envelope, s);
        if (s > 2.0 * envelope + tol_T) rep.envelope_ok = false;
    }
    rep.final_le_first = std::abs(rep.results.back().S) <= std::abs(rep.results.front().S) + tol_T;
    return rep;
}

PreservationReport preservation_report(const std::vector<ShiftSearchResult>& results, int seed_stratum) {
    PreservationReport rep;
    rep.seed_stratum = seed_stratum;
    for (const ShiftSearchResult& res : results) {
        PreservationEntry e;
        e.r = res.r;
        e.S = res.S;
        e.pinched = res.pinched;
        if (on_free_boundary(res.solution.w, res.origin)) {
            e.classification = classify(res.solution.w, res.origin);
        } else {
            e.classification.q = res.origin;
            e.classification.position = res.solution.w.grid().coord(res.origin);
        }
        rep.entries.push_back(std::move(e));
    }
    // Walk radii from small to large; the stable range ends at the first non-singular verdict.
    std::vector<std::size_t> order(rep.entries.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rep.entries[a].r < rep.entries[b].r; });
    rep.preserved = !order.empty();
    rep.all_singular = true;
    bool stable = true;
    for (std::size_t k : order) {
        const auto& c = rep.entries[k].classification;
        const bool singular = c.verdict == Verdict::singular;
        if (!singular) rep.all_singular = false;
        if (stable && singular) {
            rep.stable_radius = rep.entries[k].r;
            if (c.stratum > seed_stratum) rep.preserved = false;
        } else {
            stable = false;
        }
    }
    if (rep.stable_radius == 0.0) rep.preserved = false;
    return rep;
}

PreservationReport preservation_check(const ScalarField& w, const std::vector<double>& radii, double tol_T,
                                      int seed_stratum, const ShiftOptions& options) {
    std::vector<ShiftSearchResult> results;
    for (double r : radii) results.push_back(find_shift(w, r, tol_T, options));
    return preservation_report(results, seed_stratum);
}

ScalarField normalize_coordinates(const ScalarField& w, const Sym2& a0) {
    if (a0.m11 == 1.0 && a0.m12 == 0.0 && a0.m22 == 1.0) return w;
    const auto ev = a0.eigenvalues();
    if (!(ev[0] > 0.0)) throw PreconditionError("coefficient matrix at the origin is not positive definite");
    // a0^{1/2} = V diag(sqrt(ev)) V^T
    const Point v = a0.principal_axis();
    const double s0 = std::sqrt(ev[0]);
    const double s1 = std::sqrt(ev[1]);
    const Sym2 root{s1 * v.x * v.x + s0 * v.y * v.y, (s1 - s0) * v.x * v.y, s1 * v.y * v.y + s0 * v.x * v.x};
    const Grid& g = w.grid();
    ScalarField out(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Point y = g.coord(g.node_of(k));
        Point x{root.m11 * y.x + root.m12 * y.y, root.m12 * y.x + root.m22 * y.y};
        x.x = std::clamp(x.x, g.lo().x, g.hi().x);
        x.y = std::clamp(x.y, g.lo().y, g.hi().y);
        out[k] = w.sample(x);
    }
    return out;
}

std::string shift_json(const ShiftSearchResult& r) {
    nlohmann::ordered_json j;
    j["r"] = r.r;
    j["S"] = r.S;
    j["t"] = r.S * r.r * r.r;
    j["bracket_steps"] = r.steps;
    j["initial_bracket"] = {r.initial_lo, r.initial_hi};
    j["final_bracket"] = {r.brackets.back().first, r.brackets.back().second};
    j["status"] = to_string(r.status);
    j["pinched"] = r.pinched;
    j["lattice_n_side"] = r.solution.w.grid().n_side();
    j["comp_residual"] = r.solution.comp_residual;
    j["pde_residual"] = r.solution.pde_residual;
    return j.dump(2) + "\n";
}

}  // namespace mvset

#include "mvset/mvs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "mvset/error.hpp"

namespace mvset {

namespace {

constexpr int dx4[4] = {1, -1, 0, 0};
constexpr int dy4[4] = {0, 0, 1, -1};

}  // namespace

RegionDecomposition extract_regions(const ObstacleSolution& s) {
    const Grid& g = s.w.grid();
    RegionDecomposition r{NodeSet(g), NodeSet(g), NodeSet(g), {}};
    for (std::size_t k : s.domain.members()) {
        if (s.w[k] > 0.0) r.omega.insert(k);
        else r.contact.insert(k);
    }
    for (std::size_t k : r.contact.members()) {
        const Node c = g.node_of(k);
        for (int d = 0; d < 4; ++d) {
            if (r.omega.contains(Node{c.i + dx4[d], c.j + dy4[d]})) {
                r.fb.insert(k);
                break;
            }
        }
    }
    r.boundary = trace_boundary(r.omega);
    return r;
}

bool NestingReport::nested() const {
    return std::all_of(violations.begin(), violations.end(), [](std::size_t v) { return v == 0; });
}

MvsFamily build_family(const StencilOperator& op, const GreenFunction& green, const std::vector<double>& radii,
                       const LcpOptions& options) {
    const Grid& g = op.grid();
    if (radii.empty()) throw PreconditionError("mean value family needs at least one radius");
    for (std::size_t i = 1; i < radii.size(); ++i) {
        if (!(radii[i] > radii[i - 1])) {
            std::ostringstream os;
            os << "radii must be strictly increasing (got " << radii[i - 1] << " then " << radii[i] << ")";
            throw PreconditionError(os.str());
        }
    }
    const double min_r = 4.0 * g.h() * std::sqrt(std::numbers::pi);
    if (radii.front() < min_r) {
        std::ostringstream os;
        os << "smallest radius " << radii.front() << " is below the resolution bound 4h sqrt(pi) = " << min_r;
        throw PreconditionError(os.str());
    }

    MvsFamily fam{green.pole, radii, {}, {}, {}, op.rho()};
    for (double r : radii) {
        fam.solutions.push_back(solve_mean_value(op, green, r, options));
        fam.regions.push_back(extract_regions(fam.solutions.back()));
    }
    for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
        const NodeSet missing = fam.regions[i].omega.minus(fam.regions[i + 1].omega);
        fam.nesting.violations.push_back(missing.count());
    }
    return fam;
}

double strict_gap(const RegionDecomposition& a, const RegionDecomposition& b) {
    if (a.omega == b.omega) return 0.0;
    return contour_distance(a.boundary, b.boundary);
}

double set_average(const ScalarField& v, const NodeSet& set, const std::vector<double>& rho) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k : set.members()) {
        num += rho[k] * v[k];
        den += rho[k];
    }
    if (den == 0.0) throw PreconditionError("average over an empty set");
    return num / den;
}

namespace {

double round12(double x) { return std::round(x * 1e12) / 1e12; }

}  // namespace

MeanValueReport verify_mean_value(const ScalarField& v, const MvsFamily& family, bool subsolution) {
    MeanValueReport rep;
    rep.subsolution = subsolution;
    rep.center_value = v.at(family.center);
    double prev = round12(rep.center_value);
    double prev_avg = std::numeric_limits<double>::quiet_NaN();
    for (const auto& reg : family.regions) {
        const double avg = set_average(v, reg.omega, family.rho);
        rep.averages.push_back(avg);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(avg - rep.center_value));
        const double cur = round12(avg);
        if (cur < prev) {
            rep.chain_holds = false;
            rep.max_violation = std::max(rep.max_violation, prev - cur);
        }
        if (!std::isnan(prev_avg) && !(cur > prev_avg)) rep.strictly_increasing = false;
        prev_avg = cur;
        prev = cur;
    }
    return rep;
}

std::vector<ConverseEntry> converse_check(const ScalarField& v, const StencilOperator& op,
                                          const std::vector<Node>& centers, double r,
                                          const LcpOptions& options) {
    std::vector<ConverseEntry> out;
    const ScalarField lv = op.apply(v);
    for (const Node& c : centers) {
        const GreenFunction green = compute_green(op, c);
        const ObstacleSolution s = solve_mean_value(op, green, r, options);
        const RegionDecomposition reg = extract_regions(s);
        ConverseEntry e;
        e.center = c;
        e.value = v.at(c);
        e.average = set_average(v, reg.omega, op.rho());
        e.residual = std::abs(e.value - e.average);
        e.stencil_residual = std::abs(lv.at(c));
        out.push_back(e);
    }
    return out;
}

BallBounds ball_bounds(const MvsFamily& family) {
    if (family.regions.empty()) throw PreconditionError("ball bounds of an empty family");
    BallBounds b;
    b.c_est = std::numeric_limits<double>::infinity();
    b.C_est = 0.0;
    for (std::size_t i = 0; i < family.regions.size(); ++i) {
        const auto& reg = family.regions[i];
        if (reg.omega.empty()) {
            std::ostringstream os;
            os << "mean value set for r=" << family.radii[i] << " is empty";
            throw PreconditionError(os.str());
        }
        const Point x0 = reg.omega.grid().coord(family.center);
        double in = std::numeric_limits<double>::infinity();
        double out = 0.0;
        for (const auto& loop : reg.boundary.loops) {
            for (const Point& p : loop) {
                const double d = norm(p - x0);
                in = std::min(in, d);
                out = std::max(out, d);
            }
        }
        in = std::min(in, distance_to_contour(reg.boundary, x0));
        const double r = family.radii[i];
        b.inradius_ratio.push_back(in / r);
        b.circumradius_ratio.push_back(out / r);
        b.c_est = std::min(b.c_est, in / r);
        b.C_est = std::max(b.C_est, out / r);
    }
    return b;
}

std::vector<VolumeEntry> volume_identity(const MvsFamily& family, const StencilOperator& op) {
    const Grid& g = op.grid();
    const double h2 = g.h() * g.h();
    const ScalarField delta = discrete_delta(op, family.center);
    std::vector<VolumeEntry> out;
    for (std::size_t i = 0; i < family.radii.size(); ++i) {
        const double r = family.radii[i];
        const auto& s = family.solutions[i];
        VolumeEntry e;
        e.r = r;
        for (std::size_t k : family.regions[i].omega.members()) e.volume += op.rho(k) * h2;
        e.relative_error = (e.volume - r * r) / (r * r);
        for (std::size_t k : s.domain.members()) {
            if (op.is_dirichlet(k)) continue;
            const double lw = op.apply_row(s.w, k) / op.rho(k);
            e.discrete_chi_volume += op.rho(k) * h2 * (lw + delta[k]) * r * r;
        }
        out.push_back(e);
    }
    return out;
}

std::string family_json(const MvsFamily& family, const StencilOperator& op) {
    using nlohmann::ordered_json;
    const auto vols = volume_identity(family, op);
    const auto balls = ball_bounds(family);
    const Grid& g = op.grid();
    ordered_json j;
    j["operator"] = op.label();
    j["n_side"] = g.n_side();
    j["h"] = g.h();
    j["center"] = {g.coord(family.center).x, g.coord(family.center).y};
    j["nested"] = family.nesting.nested();
    j["nesting_violations"] = family.nesting.violations;
    ordered_json members = ordered_json::array();
    std::vector<double> gaps;
    for (std::size_t i = 0; i < family.radii.size(); ++i) {
        ordered_json m;
        m["r"] = family.radii[i];
        m["volume"] = vols[i].volume;
        m["vol_rel_err"] = vols[i].relative_error;
        m["discrete_chi_volume"] = vols[i].discrete_chi_volume;
        m["inradius_ratio"] = balls.inradius_ratio[i];
        m["circumradius_ratio"] = balls.circumradius_ratio[i];
        if (i + 1 < family.radii.size()) {
            const double gap = strict_gap(family.regions[i], family.regions[i + 1]);
            gaps.push_back(gap);
            m["gap_to_next"] = gap;
            m["strict"] = gap >= 2.0 * g.h();
        } else {
            m["gap_to_next"] = nullptr;
        }
        const auto& s = family.solutions[i];
        m["omega_nodes"] = family.regions[i].omega.count();
        m["fb_nodes"] = family.regions[i].fb.count();
        m["comp_residual"] = s.comp_residual;
        m["pde_residual"] = s.pde_residual;
        m["sweeps"] = s.sweeps;
        m["refinements"] = s.refinements;
        members.push_back(std::move(m));
    }
    j["members"] = std::move(members);
    j["gaps"] = gaps;
    j["c_est"] = balls.c_est;
    j["C_est"] = balls.C_est;
    return j.dump(2) + "\n";
}

}  // namespace mvset

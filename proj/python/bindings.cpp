#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mvset/cli.hpp"
#include "mvset/error.hpp"
#include "mvset/freeboundary.hpp"
#include "mvset/greens.hpp"
#include "mvset/mvs.hpp"
#include "mvset/obstacle.hpp"
#include "mvset/scenario.hpp"
#include "mvset/singshift.hpp"

namespace py = pybind11;
using namespace mvset;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Fields cross the boundary as (n, n) arrays indexed [j, i] (row = y).
Array to_array(const ScalarField& f) {
    const auto n = static_cast<py::ssize_t>(f.grid().n_side());
    Array out({n, n});
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

ScalarField from_array(const Grid& g, const Array& a) {
    if (a.ndim() != 2 || a.shape(0) != g.n_side() || a.shape(1) != g.n_side())
        throw PreconditionError("field array must have shape (n_side, n_side)");
    return ScalarField(g, std::vector<double>(a.data(), a.data() + a.size()));
}

py::object parse_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

Point point_of(const std::pair<double, double>& p) { return {p.first, p.second}; }

struct PyOperator {
    Scenario scenario;
    StencilOperator op;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mean value sets, obstacle problems and blow-up analysis on square grids";

    // Translators run newest first, so the subclasses shadow the base.
    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<GeometryError>(m, "GeometryError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());

    py::class_<Grid>(m, "Grid")
        .def(py::init([](double lo, double hi, int n) { return make_grid({lo, lo}, {hi, hi}, n); }),
             py::arg("lo") = -1.0, py::arg("hi") = 1.0, py::arg("n_side") = 129)
        .def_property_readonly("h", &Grid::h)
        .def_property_readonly("n_side", &Grid::n_side)
        .def("coord", [](const Grid& g, int i, int j) { const Point p = g.coord(i, j); return py::make_tuple(p.x, p.y); })
        .def("nearest_node",
             [](const Grid& g, double x, double y) { const Node n = g.nearest_node({x, y}); return py::make_tuple(n.i, n.j); })
        .def("coordinates", [](const Grid& g) {
            const ScalarField x = ScalarField::from_function(g, [](Point p) { return p.x; });
            const ScalarField y = ScalarField::from_function(g, [](Point p) { return p.y; });
            return py::make_tuple(to_array(x), to_array(y));
        });

    py::class_<PyOperator>(m, "Operator")
        .def(py::init([](const std::string& name, const Grid& g) {
                 const Scenario& s = find_scenario(name);
                 return PyOperator{s, s.assemble(g)};
             }),
             py::arg("scenario"), py::arg("grid"))
        .def_static(
            "inline",
            [](const std::string& kind, const std::string& t11, const std::string& t12, const std::string& t22,
               const Grid& g) {
                if (kind != "coefficients" && kind != "metric")
                    throw ConfigError("kind must be 'coefficients' or 'metric'");
                Scenario s = inline_scenario(kind == "metric" ? Scenario::Kind::metric : Scenario::Kind::coefficients,
                                             t11, t12, t22);
                StencilOperator op = s.assemble(g);
                return PyOperator{std::move(s), std::move(op)};
            },
            py::arg("kind"), py::arg("t11"), py::arg("t12"), py::arg("t22"), py::arg("grid"))
        .def_property_readonly("label", [](const PyOperator& o) { return o.op.label(); })
        .def_property_readonly("grid", [](const PyOperator& o) { return o.op.grid(); })
        .def("apply", [](const PyOperator& o, const Array& u) { return to_array(o.op.apply(from_array(o.op.grid(), u))); });

    py::class_<ObstacleSolution>(m, "Solution")
        .def_property_readonly("w", [](const ObstacleSolution& s) { return to_array(s.w); })
        .def_property_readonly("comp_residual", [](const ObstacleSolution& s) { return s.comp_residual; })
        .def_property_readonly("pde_residual", [](const ObstacleSolution& s) { return s.pde_residual; })
        .def_property_readonly("sweeps", [](const ObstacleSolution& s) { return s.sweeps; })
        .def_property_readonly("refinements", [](const ObstacleSolution& s) { return s.refinements; })
        .def_property_readonly("warnings", [](const ObstacleSolution& s) { return s.warnings; })
        .def_property_readonly("omega_nodes", [](const ObstacleSolution& s) { return extract_regions(s).omega.count(); });

    m.def("scenarios", [] {
        py::list out;
        for (const auto& s : builtin_scenarios())
            out.append(py::make_tuple(s.name, s.kind == Scenario::Kind::metric ? "metric" : "coefficients", s.description));
        return out;
    });

    m.def(
        "compute_green",
        [](const PyOperator& o, std::pair<double, double> center) {
            const GreenFunction g = compute_green(o.op, o.op.grid().nearest_node(point_of(center)));
            py::dict info;
            info["cg_iterations"] = g.stats.iterations;
            info["relative_residual"] = g.stats.relative_residual;
            info["boundary_flux"] = boundary_flux(o.op, g.field);
            return py::make_tuple(to_array(g.field), info);
        },
        py::arg("op"), py::arg("center") = std::make_pair(0.0, 0.0),
        "Green's function with the pole at the node nearest `center`; returns (field, info).");

    m.def(
        "solve_mean_value",
        [](const PyOperator& o, double r, std::pair<double, double> center) {
            const GreenFunction g = compute_green(o.op, o.op.grid().nearest_node(point_of(center)));
            return solve_mean_value(o.op, g, r);
        },
        py::arg("op"), py::arg("r"), py::arg("center") = std::make_pair(0.0, 0.0));

    m.def(
        "solve_classical",
        [](const PyOperator& o, const Array& data) { return solve_classical(o.op, from_array(o.op.grid(), data)); },
        py::arg("op"), py::arg("data"), "Obstacle problem L u = chi_{u > 0} with boundary values taken from `data`.");

    m.def(
        "build_family",
        [](const PyOperator& o, const std::vector<double>& radii, std::pair<double, double> center) {
            const GreenFunction g = compute_green(o.op, o.op.grid().nearest_node(point_of(center)));
            return parse_json(family_json(build_family(o.op, g, radii), o.op));
        },
        py::arg("op"), py::arg("radii"), py::arg("center") = std::make_pair(0.0, 0.0),
        "Family report: volumes, gaps, ball ratios and nesting.");

    m.def(
        "classify",
        [](const Grid& g, const Array& w, std::pair<double, double> q) {
            return parse_json(classification_json(classify(from_array(g, w), g.nearest_node(point_of(q)))));
        },
        py::arg("grid"), py::arg("w"), py::arg("q") = std::make_pair(0.0, 0.0));

    m.def(
        "find_shift",
        [](const Grid& g, const Array& w, double r, double tol_T) {
            return parse_json(shift_json(find_shift(from_array(g, w), r, tol_T)));
        },
        py::arg("grid"), py::arg("w"), py::arg("r"), py::arg("tol_T") = 1e-6);

    m.def(
        "uniqueness_scan",
        [](const Grid& g, const Array& w, double r, const std::vector<double>& T) {
            const ScanResult s = uniqueness_scan(from_array(g, w), r, T);
            py::dict out;
            py::list statuses;
            for (auto st : s.statuses) statuses.append(to_string(st));
            out["T"] = s.T;
            out["statuses"] = statuses;
            out["ok"] = s.ok();
            out["band_width"] = s.band_width;
            out["violations"] = s.violations;
            return out;
        },
        py::arg("grid"), py::arg("w"), py::arg("r"), py::arg("T"));

    m.def(
        "run_command",
        [](const std::string& command, const std::string& config_text, const std::string& out_dir) {
            run_command(command, parse_config(config_text), out_dir);
        },
        py::arg("command"), py::arg("config"), py::arg("out_dir"),
        "Runs a CLI subcommand with the given config text.");
}

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "commands.hpp"
#include "nlab/errors.hpp"
#include "nlab/experiments.hpp"
#include "nlab/nonlocal.hpp"
#include "nlab/riesz.hpp"
#include "nlab/suite.hpp"
#include "nlab/symm.hpp"

namespace py = pybind11;
using namespace nlab;

namespace {

Side side_of(const std::string& s) {
    if (s == "lower") return Side::Lower;
    if (s == "upper") return Side::Upper;
    throw ConfigError("side must be 'lower' or 'upper'");
}

GridAlignedHalfSpace half_space(int axis, int offset, const std::string& side) { return {axis, offset, side_of(side)}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Nonlocal energies, polarization and rearrangement on uniform grids";

    py::register_exception<GuardViolation>(m, "GuardViolation", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalFailure>(m, "NumericalFailure", PyExc_ArithmeticError);

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init<int, double, int>(), py::arg("dim"), py::arg("half_width"), py::arg("cells_per_axis"))
        .def_property_readonly("dim", &GridSpec::dim)
        .def_property_readonly("half_width", &GridSpec::half_width)
        .def_property_readonly("cells_per_axis", &GridSpec::cells_per_axis)
        .def_property_readonly("h", &GridSpec::h)
        .def_property_readonly("size", &GridSpec::size)
        .def("center", &GridSpec::center)
        .def("__repr__", [](const GridSpec& g) {
            return "GridSpec(dim=" + std::to_string(g.dim()) + ", half_width=" + std::to_string(g.half_width()) +
                   ", cells_per_axis=" + std::to_string(g.cells_per_axis()) + ")";
        });

    py::class_<GridFunction>(m, "GridFunction")
        .def(py::init<GridSpec>())
        .def(py::init<GridSpec, std::vector<double>>(), py::arg("spec"), py::arg("values"))
        .def_property_readonly("spec", &GridFunction::spec)
        .def_property_readonly("values",
                               [](const GridFunction& u) { return std::vector<double>(u.values().begin(), u.values().end()); })
        .def("__len__", &GridFunction::size)
        .def("__getitem__",
             [](const GridFunction& u, std::size_t i) {
                 if (i >= u.size()) throw py::index_error();
                 return u[i];
             })
        .def(py::self == py::self);

    m.def("i_delta", [](const GridFunction& u, double p, double delta) {
        return i_delta(u, {p, delta, 0.5}).value_or_inf();
    }, py::arg("u"), py::arg("p"), py::arg("delta"), "I_delta(u); inf when divergent");
    m.def("gagliardo", [](const GridFunction& u, double p, double s) {
        return gagliardo_seminorm_p(u, {p, 1.0, s}).value_or_inf();
    }, py::arg("u"), py::arg("p"), py::arg("s"));
    m.def("defect", [](const GridFunction& u, int axis, int offset, const std::string& side, double p, double delta) {
        return defect(u, half_space(axis, offset, side), {p, delta, 0.5}).value_or_inf();
    }, py::arg("u"), py::arg("axis"), py::arg("offset_cells"), py::arg("side"), py::arg("p"), py::arg("delta"));
    m.def("polarize", [](const GridFunction& u, int axis, int offset, const std::string& side) {
        return polarize(u, half_space(axis, offset, side));
    }, py::arg("u"), py::arg("axis") = 0, py::arg("offset_cells") = 0, py::arg("side") = "lower");
    m.def("schwarz_rearrange", &schwarz_rearrange, py::arg("u"));
    m.def("knp_constant", &knp_constant, py::arg("dim"), py::arg("p"));
    m.def("riesz_constant", &riesz_constant, py::arg("dim"), py::arg("s"));
    m.def("fractional_gradient",
          [](const GridFunction& u, double s) { return fractional_gradient(u, s).vectors; }, py::arg("u"),
          py::arg("s"), "D^s u at cell centers, dim components per cell");

    m.def("_counterexample_scan", [](double p, double epsilon, std::vector<double> deltas, int refinement, bool grid) {
        return counterexample_scan(p, epsilon, deltas, refinement, false, grid).to_json().dump();
    }, py::arg("p"), py::arg("epsilon"), py::arg("deltas"), py::arg("refinement") = 8, py::arg("with_grid") = true);
    m.def("_inequality_suite", [](std::size_t trials, std::uint64_t seed) {
        return inequality_suite(trials, seed).to_json().dump();
    }, py::arg("trials"), py::arg("seed"));

    m.def("commands", [] {
        std::vector<std::string> names;
        for (const auto& c : cli::commands()) names.push_back(c.name);
        return names;
    });
    m.def("_run", [](const std::string& command, const std::string& params, const std::string& out_dir,
                     std::uint64_t seed) {
        const auto& cmd = cli::find_command(command);
        cli::RunConfig rc;
        rc.command = command;
        rc.parameters = cli::merge_parameters(cmd, nlohmann::json::object(), nlohmann::json::parse(params));
        rc.out_dir = out_dir;
        rc.seed = seed;
        std::vector<std::string> paths;
        for (const auto& p : cli::execute(rc)) paths.push_back(p.string());
        return paths;
    }, py::arg("command"), py::arg("parameters"), py::arg("out_dir"), py::arg("seed") = 1);
}

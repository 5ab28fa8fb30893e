// pybind11 surface: apply a named operator on a torus, dump curvature
// scalars, run identity suites, and expose the normalization constants.
#include "bg/reference.hpp"
#include "bg/scenario.hpp"
#include "bg/solver.hpp"
#include "bg/trigpoly.hpp"
#include "bg/verify.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace bg;

namespace {

GridPtr make_grid(int n, const std::vector<int>& sizes) {
    std::vector<int> s = sizes;
    if (s.size() == 1) s.assign(n, s[0]);
    return TorusGrid::make(n, s);
}

ScalarField to_scalar(const GridPtr& grid, py::array_t<double, py::array::c_style> a) {
    if (static_cast<std::size_t>(a.size()) != grid->npts)
        throw std::invalid_argument("phi: expected one value per grid point");
    ScalarField f(grid);
    std::copy(a.data(), a.data() + grid->npts, f.v.begin());
    return f;
}

FormField to_form(const GridPtr& grid, int k, py::array_t<double, py::array::c_style> a) {
    FormField f(grid, k);
    if (static_cast<std::size_t>(a.size()) != f.v.size())
        throw std::invalid_argument("form: expected ncomp * npts values");
    std::copy(a.data(), a.data() + f.v.size(), f.v.begin());
    return f;
}

py::array_t<double> from_form(const FormField& f) {
    py::array_t<double> out({static_cast<py::ssize_t>(f.ncomp()),
                             static_cast<py::ssize_t>(f.grid->npts)});
    std::copy(f.v.begin(), f.v.end(), out.mutable_data());
    return out;
}

CollarGeometry geom_for(const GridPtr& grid, const py::object& phi) {
    if (phi.is_none()) {
        MetricSeries ms;
        ms.grid = grid;
        ms.h0 = flat_metric(grid);
        ms.order = grid->n;
        return make_collar_geometry(ms);
    }
    ScalarField p = to_scalar(grid, phi.cast<py::array_t<double, py::array::c_style>>());
    return make_collar_geometry(fg_metric_series(compute_curvature(conformal_metric(p))));
}

py::array_t<double> apply_operator(const std::string& op, int n, const std::vector<int>& sizes,
                                   const py::object& phi, int k, int ell,
                                   py::array_t<double, py::array::c_style> w_in) {
    GridPtr grid = make_grid(n, sizes);
    FormField w = to_form(grid, k, w_in);
    if (op == "Gtop") {
        Metric h0 = phi.is_none()
                        ? flat_metric(grid)
                        : conformal_metric(to_scalar(
                              grid, phi.cast<py::array_t<double, py::array::c_style>>()));
        return from_form(operator_G_top(w, h0));
    }
    CollarGeometry geom = geom_for(grid, phi);
    if (op == "Lk_ell") return from_form(operator_Lk_ell(geom, w, ell));
    if (op == "Bp" || op == "Dp" || op == "Q") {
        RelOperatorSet rel = relative_operators(geom, w);
        return from_form(op == "Bp" ? rel.Bp : op == "Dp" ? rel.Dp : rel.Q);
    }
    if (op == "L" || op == "G" || op == "B" || op == "C" || op == "D") {
        BGOperatorSet abs = absolute_operators(geom, w);
        return from_form(op == "L"   ? abs.L
                         : op == "G" ? abs.G
                         : op == "B" ? abs.B
                         : op == "C" ? abs.C
                                     : abs.D);
    }
    throw std::invalid_argument("unknown operator: " + op);
}

py::dict curvature_summary(int n, const std::vector<int>& sizes, const py::object& phi) {
    GridPtr grid = make_grid(n, sizes);
    Metric h0 = phi.is_none() ? flat_metric(grid)
                              : conformal_metric(to_scalar(
                                    grid, phi.cast<py::array_t<double, py::array::c_style>>()));
    CurvatureData c = compute_curvature(h0);
    py::dict d;
    auto arr = [](const std::vector<double>& v) {
        py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
        std::copy(v.begin(), v.end(), a.mutable_data());
        return a;
    };
    d["scal"] = arr(c.scal.v);
    d["ricci"] = arr(c.ricci.v);
    d["schouten"] = arr(c.schouten.v);
    d["bach"] = arr(c.bach.v);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Branson-Gover form operators from Fefferman-Graham series";
    m.def("apply_operator", &apply_operator, py::arg("op"), py::arg("n"), py::arg("sizes"),
          py::arg("phi") = py::none(), py::arg("k") = 0, py::arg("ell") = 0, py::arg("w"),
          "Apply a named operator (Lk_ell | L | G | B | C | D | Bp | Dp | Q | Gtop) to a "
          "k-form given as an (ncomp, npts) array; phi=None means the flat metric.");
    m.def("curvature", &curvature_summary, py::arg("n"), py::arg("sizes"),
          py::arg("phi") = py::none(),
          "Scalar/Ricci/Schouten/Bach fields (packed component arrays).");
    m.def("random_form",
          [](int n, const std::vector<int>& sizes, int k, int max_mode, unsigned seed) {
              GridPtr grid = make_grid(n, sizes);
              return from_form(random_lowfreq_form(grid, k, max_mode, seed));
          },
          py::arg("n"), py::arg("sizes"), py::arg("k"), py::arg("max_mode") = 2,
          py::arg("seed") = 1);
    m.def("run_suite",
          [](const std::string& suite, unsigned seed) {
              return report_json(run_suite(suite, seed));
          },
          py::arg("suite"), py::arg("seed") = 0, "Run an identity suite; returns JSON text.");
    m.def("coeff_ckl", &coeff_ckl, py::arg("n"), py::arg("k"), py::arg("ell"));
    m.def("coeff_ck", &coeff_ck, py::arg("n"), py::arg("k"));
    py::register_exception<guard_error>(m, "GuardError");
}

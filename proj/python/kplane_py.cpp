#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "kplane/cc.hpp"
#include "kplane/errors.hpp"
#include "kplane/extremal.hpp"
#include "kplane/io.hpp"
#include "kplane/transform.hpp"
#include "kplane/verify.hpp"

namespace py = pybind11;
using namespace kplane;

namespace {

struct Grid {
  GridPtr ptr;
};

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

RadialProfile to_profile(const Grid& grid, const Array& values) {
  if (values.ndim() != 1 || static_cast<std::size_t>(values.size()) != grid.ptr->size()) {
    throw ParameterError("profile length must match the grid size");
  }
  return RadialProfile(grid.ptr, std::vector<double>(values.data(), values.data() + values.size()));
}

IntervalSet to_set(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<Interval> intervals;
  for (const auto& [a, b] : pairs) intervals.push_back({a, b});
  return IntervalSet(std::move(intervals));
}

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_kplane, m) {
  m.doc() = "Radial k-plane transform and its sharp L^p -> L^q inequality";
  m.attr("__version__") = KPLANE_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<IterationAnomaly>(m, "IterationAnomaly", base.ptr());

  py::class_<Grid>(m, "Grid", "Composite Gauss-Legendre grid in theta = atan(r).")
      .def(py::init([](int n, double rmax, std::vector<double> breakpoints) {
             return Grid{make_grid(n, rmax, breakpoints)};
           }),
           py::arg("n"), py::arg("rmax") = kUnbounded, py::arg("breakpoints") = std::vector<double>{})
      .def_property_readonly("nodes", [](const Grid& g) { return to_array(g.ptr->nodes()); })
      .def_property_readonly("unbounded", [](const Grid& g) { return g.ptr->unbounded(); })
      .def("__len__", [](const Grid& g) { return g.ptr->size(); })
      .def("integrate",
           [](const Grid& g, const Array& values) {
             return g.ptr->integrate(to_profile(g, values).values());
           })
      .def("interpolate", [](const Grid& g, const Array& values, double r) {
        return to_profile(g, values).at(r);
      });

  m.def(
      "exponents",
      [](int k, int d) {
        const Params p = make_params(k, d);
        return py::make_tuple(p.pd(), p.qd());
      },
      py::arg("k"), py::arg("d"), "(p, q) = ((d+1)/(k+1), d+1); raises ParameterError unless 1 <= k < d.");

  m.def(
      "transform",
      [](int k, int d, const Grid& grid, const Array& f) {
        return to_array(apply_T(make_params(k, d), to_profile(grid, f)).values());
      },
      py::arg("k"), py::arg("d"), py::arg("grid"), py::arg("f"), "Tf sampled on the grid nodes.");

  m.def(
      "transform_indicator",
      [](int k, int d, const Grid& grid, const std::vector<std::pair<double, double>>& intervals) {
        return to_array(apply_T_indicator(make_params(k, d), to_set(intervals), grid.ptr).values());
      },
      py::arg("k"), py::arg("d"), py::arg("grid"), py::arg("intervals"),
      "Closed-form transform of the indicator of a union of intervals.");

  m.def(
      "adjoint",
      [](int k, int d, const Grid& grid, const Array& g) {
        return to_array(apply_T_adjoint(make_params(k, d), to_profile(grid, g)).values());
      },
      py::arg("k"), py::arg("d"), py::arg("grid"), py::arg("g"));

  m.def(
      "operator_matrix",
      [](int k, int d, const Grid& grid) { return TransformOperator(make_params(k, d), grid.ptr).matrix(); },
      py::arg("k"), py::arg("d"), py::arg("grid"), "Dense matrix of T on the grid (rows are output nodes).");

  m.def(
      "extremizer",
      [](int k, int d, const Grid& grid, double lam) {
        return to_array(extremizer_profile(make_params(k, d), lam, grid.ptr).values());
      },
      py::arg("k"), py::arg("d"), py::arg("grid"), py::arg("lam") = 1.0,
      "h_lambda(r) = lambda^{d/p} (1 + (lambda r)^2)^{-(k+1)/2}.");

  m.def(
      "functional_ratio",
      [](int k, int d, const Grid& grid, const Array& f) {
        return functional_ratio(make_params(k, d), to_profile(grid, f));
      },
      py::arg("k"), py::arg("d"), py::arg("grid"), py::arg("f"), "||Tf||_q / ||f||_p.");

  m.def(
      "constant_A", [](int k, int d) { return constant_A(make_params(k, d)); }, py::arg("k"), py::arg("d"));

  m.def(
      "constant_B",
      [](int k, int d, int resolution) {
        const auto b = constant_B(make_params(k, d), resolution);
        return py::make_tuple(b.value, b.est_error);
      },
      py::arg("k"), py::arg("d"), py::arg("resolution") = 2048, "(value, est_error) of the ratio at the extremizer.");

  m.def(
      "random_profile",
      [](int k, int d, const Grid& grid, std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return to_array(random_decaying_profile(make_params(k, d), grid.ptr, rng).values());
      },
      py::arg("k"), py::arg("d"), py::arg("grid"), py::arg("seed"));

  m.def(
      "search",
      [](int k, int d, const Grid& grid, const Array& init, int max_iter, double tol) {
        SearchOptions options;
        options.max_iter = max_iter;
        options.tol = tol;
        const auto trace = search_extremizer(make_params(k, d), to_profile(grid, init), options);
        py::dict out = to_python(io::to_json(trace));
        out["profile"] = to_array(trace.final_profile.values());
        return out;
      },
      py::arg("k"), py::arg("d"), py::arg("grid"), py::arg("init"), py::arg("max_iter") = 500,
      py::arg("tol") = 1e-8, "Fixed-point extremizer search; returns the trace with the final profile.");

  m.def(
      "classify",
      [](int k, int d, const Grid& grid, const std::vector<Array>& sequence, double eps, double separation_min,
         double floor) {
        std::vector<RadialProfile> seq;
        for (const auto& f : sequence) seq.push_back(to_profile(grid, f));
        TrichotomyOptions options;
        options.eps = eps;
        options.separation_min = separation_min;
        options.floor = floor;
        return to_python(io::to_json(classify_trichotomy(make_params(k, d), seq, options)));
      },
      py::arg("k"), py::arg("d"), py::arg("grid"), py::arg("sequence"), py::arg("eps") = 0.1,
      py::arg("separation_min") = 10.0, py::arg("floor") = 0.1,
      "Tight / Vanishing / Dichotomy / Undetermined verdict for unit-norm profiles.");

  m.def(
      "synthetic_sequence",
      [](int k, int d, const Grid& grid, const std::string& kind, double alpha) {
        std::vector<py::array_t<double>> out;
        for (const auto& f : synthetic_sequence(make_params(k, d), grid.ptr, kind, alpha)) {
          out.push_back(to_array(f.values()));
        }
        return out;
      },
      py::arg("k"), py::arg("d"), py::arg("grid"), py::arg("kind"), py::arg("alpha") = 0.4);

  m.def(
      "verify",
      [](const std::string& suite, int k, int d, std::uint64_t seed, int trials, int grid_n) {
        SuiteOptions options;
        options.seed = seed;
        options.trials = trials;
        options.grid_n = grid_n;
        py::list out;
        for (const auto& r : run_suite(parse_suite(suite), make_params(k, d), options)) {
          out.append(to_python(io::to_json(r)));
        }
        return out;
      },
      py::arg("suite"), py::arg("k"), py::arg("d"), py::arg("seed") = 1, py::arg("trials") = 100,
      py::arg("grid_n") = 2048, "Runs a verification suite and returns its reports as dicts.");

  m.def(
      "resample",
      [](const std::vector<double>& r, const std::vector<double>& values, const Grid& grid) {
        if (r.size() != values.size()) throw DataError("r and values differ in length");
        for (std::size_t i = 0; i < r.size(); ++i) {
          if (!std::isfinite(r[i]) || !std::isfinite(values[i]) || r[i] < 0.0 || (i > 0 && !(r[i] > r[i - 1]))) {
            throw DataError("radii must be finite, nonnegative and strictly increasing");
          }
        }
        return to_array(io::resample(io::ProfileTable{r, values}, grid.ptr).values());
      },
      py::arg("r"), py::arg("values"), py::arg("grid"), "Monotone interpolation of tabulated data onto the grid.");
}

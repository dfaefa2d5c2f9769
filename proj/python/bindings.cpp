#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <string>
#include <vector>

#include "fracgs/cli.hpp"
#include "fracgs/error.hpp"
#include "fracgs/model.hpp"
#include "fracgs/scalar_gs.hpp"
#include "fracgs/spectral.hpp"
#include "fracgs/system_gs.hpp"
#include "fracgs/thresholds.hpp"

namespace py = pybind11;
using namespace fracgs;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// Grids are shared and immutable; Python holds them through this handle.
struct Grid {
  GridPtr ptr;
};

// Fields cross the boundary as C-ordered arrays of shape (n,) * dim.
Array to_numpy(const Field& f) {
  const auto& g = f.grid();
  std::vector<py::ssize_t> shape(static_cast<std::size_t>(g.dim()), g.points_per_axis());
  Array a(shape);
  std::copy(f.values().begin(), f.values().end(), a.mutable_data());
  return a;
}

Field from_numpy(const GridPtr& g, const Array& a) {
  if (static_cast<std::size_t>(a.size()) != g->size())
    throw Error(ErrorKind::GridMismatch, "array has " + std::to_string(a.size()) + " values, grid has " +
                                             std::to_string(g->size()));
  return Field(g, std::vector<double>(a.data(), a.data() + a.size()));
}

// NaN placeholders read better as None on the Python side.
py::object maybe(double x) { return std::isnan(x) ? py::none() : py::cast(x); }

py::dict constants_dict(const SharpConstants& k) {
  py::dict d;
  d["s_s"] = k.s_s;
  d["s_s_spread"] = k.s_s_spread;
  d["c_p1"] = k.c_p1;
  d["c_p1_spread"] = k.c_p1_spread;
  d["c0"] = k.c0;
  d["method"] = k.method;
  return d;
}

SharpConstants constants_from(const Exponents& e, double s_s, double c_p1) {
  SharpConstants k;
  k.s_s = s_s;
  k.c_p1 = c_p1;
  k.c0 = c0_bound(e, s_s);
  return k;
}

py::dict report_dict(const ThresholdReport& r) {
  py::dict d;
  d["mu0"] = r.mu0;
  d["mu0_error"] = r.mu0_error;
  d["mu0_bar"] = r.mu0_bar;
  d["critical_level"] = r.critical_level;
  d["lambda_tilde"] = maybe(r.lambda_tilde);
  d["a_star"] = maybe(r.a_star);
  d["lower_bound"] = maybe(r.lower_bound);
  d["upper_bound"] = r.upper_bound;
  d["a0_bound"] = maybe(r.a0_bound);
  d["regime"] = to_string(r.regime);
  d["prediction"] = to_string(r.prediction);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral solvers for a fractional Schrodinger system with one critical component.";
  m.attr("__version__") = FRACGS_VERSION;

  // Messages already lead with the error kind.
  py::register_exception<Error>(m, "FracgsError", PyExc_RuntimeError);

  py::class_<Grid>(m, "Grid")
      .def(py::init([](int dim, int n, double half_width, double s) {
             return Grid{SpectralGrid::create(dim, n, half_width, s)};
           }),
           py::arg("dim"), py::arg("n"), py::arg("half_width"), py::arg("s"))
      .def_property_readonly("dim", [](const Grid& g) { return g.ptr->dim(); })
      .def_property_readonly("n", [](const Grid& g) { return g.ptr->points_per_axis(); })
      .def_property_readonly("half_width", [](const Grid& g) { return g.ptr->half_width(); })
      .def_property_readonly("spacing", [](const Grid& g) { return g.ptr->spacing(); })
      .def_property_readonly("s", [](const Grid& g) { return g.ptr->s(); })
      .def_property_readonly("coordinates", [](const Grid& g) {
        const auto c = g.ptr->coordinates();
        return Array(static_cast<py::ssize_t>(c.size()), c.data());
      });

  m.def(
      "frac_laplacian",
      [](const Grid& grid, const Array& u, double order) {
        return to_numpy(frac_laplacian(from_numpy(grid.ptr, u), order));
      },
      py::arg("grid"), py::arg("u"), py::arg("order"));

  m.def(
      "solve_scalar",
      [](const Grid& grid, double beta, double gamma, double p, double tol, int max_iter) {
        const GridPtr& g = grid.ptr;
        ScalarSolveOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        const ScalarGroundState w = solve_scalar(g, beta, gamma, p, o);
        py::dict d;
        d["profile"] = to_numpy(w.profile);
        d["energy"] = w.energy;
        d["residual_norm"] = w.residual_norm;
        d["iterations"] = w.iterations;
        d["c_p1"] = maybe(beta == 1.0 && gamma == 1.0 ? w.c_p1 : std::nan(""));
        return d;
      },
      py::arg("grid"), py::arg("beta") = 1.0, py::arg("gamma") = 1.0, py::arg("p") = 2.0, py::arg("tol") = 1e-10,
      py::arg("max_iter") = 2000);

  m.def("scaled_energy", &scaled_energy, py::arg("dim"), py::arg("s"), py::arg("p"), py::arg("beta"),
        py::arg("gamma"), py::arg("base"));

  m.def(
      "compute_s_s",
      [](const GridPtr& g) {
        const SsEstimate e = compute_s_s(g);
        return py::make_tuple(e.value, e.spread);
      },
      py::arg("grid"), "S_s and the relative spread of its extrapolants.");

  m.def(
      "compute_sharp_constants",
      [](int dim, double s, double p, int ss_n, int cp_n) {
        ConstantsOptions o;
        o.ss_n = ss_n;
        o.cp_n = cp_n;
        return constants_dict(compute_sharp_constants(validate_exponents(dim, s, p), o));
      },
      py::arg("dim") = 3, py::arg("s") = 0.75, py::arg("p") = 2.0, py::arg("ss_n") = 128, py::arg("cp_n") = 128);

  m.def(
      "compute_mu0",
      [](int dim, double s, double p, double s_s, double c_p1) {
        return compute_mu0(validate_exponents(dim, s, p), s_s, c_p1);
      },
      py::arg("dim"), py::arg("s"), py::arg("p"), py::arg("s_s"), py::arg("c_p1"));

  m.def(
      "compute_mu0_bar", [](int dim, double s, double p) { return compute_mu0_bar(validate_exponents(dim, s, p)); },
      py::arg("dim"), py::arg("s"), py::arg("p"));

  m.def(
      "compute_lambda_tilde",
      [](int dim, double s, double p, double mu, double nu, double mu0) {
        const LambdaTilde lt = compute_lambda_tilde(validate_exponents(dim, s, p), mu, nu, mu0);
        return py::make_tuple(lt.value, lt.a_star);
      },
      py::arg("dim"), py::arg("s"), py::arg("p"), py::arg("mu"), py::arg("nu"), py::arg("mu0"));

  m.def(
      "threshold_report",
      [](int dim, double s, double p, double mu, double nu, double lambda, double s_s, double c_p1) {
        const ProblemParams pr = validate_params(RawParams{dim, s, p, mu, nu, lambda});
        return report_dict(make_threshold_report(pr, constants_from(pr.exps, s_s, c_p1)));
      },
      py::arg("dim"), py::arg("s"), py::arg("p"), py::arg("mu"), py::arg("nu"), py::arg("lambda_"), py::arg("s_s"),
      py::arg("c_p1"));

  m.def(
      "nehari_project",
      [](const Grid& grid, const Array& u, const Array& v, double s, double p, double mu, double nu, double lambda) {
        const GridPtr& g = grid.ptr;
        const ProblemParams pr = validate_params(RawParams{g->dim(), s, p, mu, nu, lambda});
        double t = 0.0;
        const FieldPair on = nehari_project(pr, {from_numpy(g, u), from_numpy(g, v)}, &t);
        return py::make_tuple(to_numpy(on.u), to_numpy(on.v), t);
      },
      py::arg("grid"), py::arg("u"), py::arg("v"), py::arg("s"), py::arg("p"), py::arg("mu"), py::arg("nu"),
      py::arg("lambda_"));

  m.def(
      "minimize_on_nehari",
      [](const Grid& grid, double p, double mu, double nu, double lambda, double s_s, double c_p1,
         std::uint64_t seed, int flow_steps) {
        const GridPtr& g = grid.ptr;
        const ProblemParams pr = validate_params(RawParams{g->dim(), g->s(), p, mu, nu, lambda});
        const ThresholdReport rep = make_threshold_report(pr, constants_from(pr.exps, s_s, c_p1));
        FlowOptions fo;
        fo.flow_steps = flow_steps;
        const std::vector<SeedPair> seeds = standard_seeds(pr, g, rep, seed);
        const GroundStateRun run = [&] {
          py::gil_scoped_release release;
          return minimize_on_nehari(pr, seeds, level_context(rep), fo);
        }();
        py::dict d;
        d["u"] = to_numpy(run.pair.u);
        d["v"] = to_numpy(run.pair.v);
        d["a_level"] = run.a_level;
        d["critical_level"] = run.critical_level;
        d["verdict"] = to_string(run.verdict);
        d["residual"] = run.residual;
        d["seed_id"] = run.seed_id;
        d["iterations"] = run.iterations;
        return d;
      },
      py::arg("grid"), py::arg("p"), py::arg("mu"), py::arg("nu"), py::arg("lambda_"), py::arg("s_s"),
      py::arg("c_p1"), py::arg("seed") = 1, py::arg("flow_steps") = 1200);

  m.def(
      "bubble_slopes",
      [](const Grid& grid, const std::vector<double>& eps, double r) {
        const GridPtr& g = grid.ptr;
        std::vector<BubbleFamily> fam;
        for (double e : eps) fam.push_back(build_bubble(g, e, r));
        const BubbleSlopes sl = bubble_slopes(fam);
        py::dict d;
        d["seminorm_excess"] = sl.seminorm_excess;
        d["crit_deficit"] = sl.crit_deficit;
        d["mass"] = sl.mass;
        return d;
      },
      py::arg("grid"), py::arg("eps"), py::arg("r"));

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "fracgs");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        py::gil_scoped_release release;
        return cli::main_entry(static_cast<int>(argv.size()), argv.data());
      },
      py::arg("args"), "Runs the command-line driver in process and returns its exit code.");
}

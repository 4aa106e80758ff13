#include <algorithm>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minkrad/minkrad.hpp"

namespace py = pybind11;
using namespace minkrad;

namespace {

// JSON crosses the boundary as text; the Python wrapper turns it into dicts.
std::string dumps(const io::json& j) { return j.dump(); }

RadialProblem parse(const std::string& text) { return io::problem_from_json(io::json::parse(text)); }

py::array_t<double> array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::dict profile_dict(const GridProfile& p) {
  py::dict d;
  d["r"] = array({p.grid.nodes().begin(), p.grid.nodes().end()});
  d["u"] = array(p.u);
  d["du"] = array(p.du);
  return d;
}

GridProfile profile_from(const std::vector<double>& r, const std::vector<double>& u, const std::vector<double>& du) {
  return GridProfile(Grid(r), u, du);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Radial Neumann problems with Minkowski curvature";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(e.kind() == ErrorKind::Io || e.kind() == ErrorKind::InvalidInput ? PyExc_ValueError
                                                                                         : PyExc_RuntimeError,
                      e.what());
    }
  });

  m.def("phi", &phi);
  m.def("phi_inv", &phi_inv);
  m.def("figure1_problem", [] { return dumps(io::problem_to_json(figure1_problem())); });
  m.def("normalize_problem", [](const std::string& text) { return dumps(io::problem_to_json(parse(text))); });

  m.def(
      "constants",
      [](const std::string& text, bool estimate_bounds, int grid_cells) {
        ConstantsOptions co;
        co.estimate_bounds = estimate_bounds;
        co.grid_cells = grid_cells;
        return dumps(io::to_json(compute_constants(parse(text), co)));
      },
      py::arg("problem"), py::arg("estimate_bounds") = true, py::arg("grid_cells") = 2000);

  m.def(
      "solve",
      [](const std::string& text, double start_level, int grid_cells, double tol) {
        SolveOptions so;
        so.start_level = start_level;
        so.grid_cells = grid_cells;
        so.tol = tol;
        const SolveResult r = solve(parse(text), {}, so);
        py::dict d = profile_dict(r.profile);
        d["report"] = dumps(io::to_json(r.report));
        return d;
      },
      py::arg("problem"), py::arg("start_level"), py::arg("grid_cells") = 2000, py::arg("tol") = 1e-10);

  m.def(
      "find_two_solutions",
      [](const std::string& text, int grid_cells) {
        const RadialProblem p = parse(text);
        ConstantsOptions co;
        co.grid_cells = grid_cells;
        const ConstantsBundle b = compute_constants(p, co);
        SearchOptions so;
        so.solve.grid_cells = grid_cells;
        const PairResult pr = find_two_solutions(p, b, so);
        py::dict d;
        d["found"] = pr.found;
        d["message"] = pr.message;
        d["bracket_consistent"] = pr.bracket_consistent;
        d["constants"] = dumps(io::to_json(b));
        py::list sols;
        for (std::size_t i = 0; i < pr.solutions.size(); ++i) {
          py::dict s = profile_dict(pr.solutions[i]);
          s["certificate"] = dumps(io::to_json(pr.certificates[i]));
          sols.append(s);
        }
        d["solutions"] = sols;
        return d;
      },
      py::arg("problem"), py::arg("grid_cells") = 2000);

  m.def(
      "certify",
      [](const std::string& text, const std::vector<double>& r, const std::vector<double>& u,
         const std::vector<double>& du, bool interpolated) {
        const Tolerances tol = interpolated ? Tolerances::interpolated() : Tolerances{};
        return dumps(io::to_json(certify(parse(text), profile_from(r, u, du), tol)));
      },
      py::arg("problem"), py::arg("r"), py::arg("u"), py::arg("du"), py::arg("interpolated") = false);

  m.def(
      "shoot",
      [](const std::string& text, double c, int output_cells) {
        StepControls ctl;
        ctl.output_cells = output_cells;
        const ShotResult s = integrate_shot(parse(text), c, ctl);
        py::dict d = profile_dict(s.profile);
        d["c"] = s.c;
        d["defect"] = s.defect;
        d["valid"] = s.valid;
        d["saturation_radius"] = s.saturation_radius;
        return d;
      },
      py::arg("problem"), py::arg("c"), py::arg("output_cells") = 2000);

  m.def(
      "find_roots",
      [](const std::string& text, double lo, double hi, int samples, int output_cells) {
        RootOptions ro;
        ro.samples = samples;
        ro.controls.output_cells = output_cells;
        std::vector<double> cs;
        for (const auto& s : find_roots(parse(text), lo, hi, ro)) cs.push_back(s.c);
        return cs;
      },
      py::arg("problem"), py::arg("lo"), py::arg("hi"), py::arg("samples") = 64, py::arg("output_cells") = 2000);

  m.def(
      "lambda_sweep",
      [](const std::string& text, const std::vector<double>& lambdas, int grid_cells) {
        SearchOptions so;
        so.solve.grid_cells = grid_cells;
        const auto rows = lambda_sweep(parse(text), lambdas, so);
        py::list out;
        for (const auto& r : rows) {
          py::dict d;
          d["lambda"] = r.lambda;
          d["n_solutions"] = r.n_solutions;
          d["norms"] = r.norms;
          out.append(d);
        }
        return out;
      },
      py::arg("problem"), py::arg("lambdas"), py::arg("grid_cells") = 2000);
}

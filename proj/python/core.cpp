#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bellforge/bell_model.hpp"
#include "bellforge/classical.hpp"
#include "bellforge/cli.hpp"
#include "bellforge/construction.hpp"
#include "bellforge/entanglement.hpp"
#include "bellforge/error.hpp"
#include "bellforge/io.hpp"
#include "bellforge/quantum.hpp"
#include "bellforge/sdp.hpp"

namespace py = pybind11;
using namespace bellforge;

// Structured results cross the boundary as JSON text; the Python package
// decodes them into dicts.
namespace {

BellFunctional functional(const std::string& text) { return bell_from_json(Json::parse(text)); }

std::string construct(int n, std::uint64_t seed, double alpha, const std::string& dist, int jobs) {
  ConstructOptions o;
  o.distribution = parse_distribution(dist);
  o.jobs = jobs;
  return to_json(construct_report(n, seed, alpha, o)).dump();
}

std::string classical(const std::string& m, double budget) {
  const BellFunctional f = functional(m);
  if (classical_exact_cost(f.scenario()) <= budget) return to_json(classical_value_exact(f, {budget, 1})).dump();
  return to_json(classical_value_local(f, 64, 0)).dump();
}

std::string run_seesaw(const std::string& m, Index dim, int restarts, std::uint64_t seed) {
  SeesawConfig cfg;
  cfg.dim = dim;
  cfg.restarts = restarts;
  cfg.seed = seed;
  const SeesawResult r = seesaw(functional(m), cfg);
  return Json{{"value", r.value},
              {"rounds", r.rounds},
              {"converged", r.converged},
              {"state", std::vector<double>(r.state.alphas().begin(), r.state.alphas().end())}}
      .dump();
}

std::string run_omega(const std::string& m, double tol) {
  SdpSettings s;
  s.tol = tol;
  const OmegaResult r = omega_op(functional(m), s);
  return Json{{"value", r.value}, {"max_value", r.max_value}, {"min_value", r.min_value}, {"converged", r.converged}}
      .dump();
}

py::tuple cli(const std::vector<std::string>& args) {
  std::vector<std::string> full{"bellforge"};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run_cli(full, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bindings for the bellforge C++ core";
  m.attr("__version__") = kVersion;

  static py::exception<Error> error(m, "BellforgeError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      py::object inst = exc(e.what());
      inst.attr("kind") = e.kind();
      PyErr_SetObject(error.ptr(), inst.ptr());
    } catch (const Json::exception& e) {
      py::object exc = error;
      py::object inst = exc(e.what());
      inst.attr("kind") = "schema";
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  m.def("chsh_game", [] { return to_json(chsh_game()).dump(); });
  m.def("construction_functional", [](int n, std::uint64_t seed) { return to_json(build_bell(gen_signs(n, seed))).dump(); },
        py::arg("n"), py::arg("seed") = 0);
  m.def("construct", &construct, py::arg("n"), py::arg("seed") = 0, py::arg("alpha") = kDefaultAlphaTop,
        py::arg("distribution") = "bernoulli", py::arg("jobs") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("classical_value", &classical, py::arg("functional"), py::arg("budget") = kDefaultEnumerationBudget,
        py::call_guard<py::gil_scoped_release>());
  m.def("seesaw", &run_seesaw, py::arg("functional"), py::arg("dim") = 2, py::arg("restarts") = 8,
        py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("omega_op", &run_omega, py::arg("functional"), py::arg("tol") = 1e-7,
        py::call_guard<py::gil_scoped_release>());
  m.def("entropy", [](const std::vector<double>& a) { return entropy_of_entanglement(SchmidtState::normalized(a)); });
  m.def("f_alpha", &f_alpha, py::arg("n"), py::arg("alpha"));
  m.def("iviol", [](const std::vector<double>& a) { return iviol(SchmidtState::normalized(a)); });
  m.def("dyadic_decompose", [](const std::vector<double>& a) { return to_json(dyadic_decompose(a)).dump(); });
  m.def("run_cli", &cli, py::arg("args"));
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hopdim/analytic.hpp"
#include "hopdim/core.hpp"
#include "hopdim/montecarlo.hpp"
#include "hopdim/numerics.hpp"

namespace py = pybind11;
using namespace hopdim;

namespace {

SampleMode mode_arg(const std::string& mode) { return parse_sample_mode(mode); }

montecarlo::GridSpec grid_arg(std::optional<std::int64_t> n_ru, std::optional<ResourceGrid> grid) {
  if (n_ru && grid) throw PreconditionError("pass either n_ru or grid, not both");
  if (grid) return *grid;
  if (n_ru) return *n_ru;
  throw PreconditionError("a grid is required: pass n_ru or grid");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Resource dimensioning for frequency-hopped packet repetition";

  // Base class first so the subclasses can name it as their parent.
  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto precondition = py::register_exception<PreconditionError>(m, "PreconditionError", error);
  py::register_exception<NoFactorizationError>(m, "NoFactorizationError", precondition);
  py::register_exception<StateSpaceError>(m, "StateSpaceError", precondition);
  py::register_exception<DomainError>(m, "DomainError", error);
  py::register_exception<RangeError>(m, "RangeError", error);
  py::register_exception<StatisticalPreconditionError>(m, "StatisticalPreconditionError", error);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error);
  py::register_exception<InternalError>(m, "InternalError", error);

  py::class_<ResourceGrid>(m, "ResourceGrid")
      .def(py::init<std::int64_t, std::int64_t>(), py::arg("p"), py::arg("q"))
      .def_property_readonly("p", &ResourceGrid::p)
      .def_property_readonly("q", &ResourceGrid::q)
      .def_property_readonly("n_ru", &ResourceGrid::n_ru)
      .def("latin_feasible", &ResourceGrid::latin_feasible, py::arg("n"))
      .def("__eq__", [](const ResourceGrid& a, const ResourceGrid& b) { return a == b; })
      .def("__repr__", [](const ResourceGrid& g) {
        return "ResourceGrid(p=" + std::to_string(g.p()) + ", q=" + std::to_string(g.q()) + ")";
      });

  py::class_<FailureEstimate>(m, "FailureEstimate")
      .def_readonly("failures", &FailureEstimate::failures)
      .def_readonly("samples", &FailureEstimate::samples)
      .def_readonly("p_hat", &FailureEstimate::p_hat)
      .def_readonly("ci_low", &FailureEstimate::ci_low)
      .def_readonly("ci_high", &FailureEstimate::ci_high)
      .def_readonly("seed", &FailureEstimate::seed)
      .def("__repr__", [](const FailureEstimate& e) {
        return "FailureEstimate(p_hat=" + std::to_string(e.p_hat) + ", failures=" +
               std::to_string(e.failures) + ", samples=" + std::to_string(e.samples) + ")";
      });

  // Closed forms
  m.def("failure_prob", &analytic::failure_prob_resolvable, py::arg("n"), py::arg("d"),
        py::arg("n_ru"), py::arg("ncmax") = 0,
        "Probability that all n repetitions are lost with ncmax resolvable collisions.");
  m.def("collision_pmf", &analytic::collision_pmf, py::arg("c"), py::arg("d"), py::arg("n"),
        py::arg("n_ru"));
  m.def("required_ru", [](std::int64_t n, std::int64_t d, double pf, std::int64_t ncmax) {
        if (ncmax == 0) return analytic::required_ru_no_resolution(n, d, pf);
        if (ncmax == 1) return analytic::required_ru_single_resolution(n, d, pf);
        return numerics::invert_required_ru_numeric(n, d, pf, ncmax);
      },
      py::arg("n"), py::arg("d"), py::arg("pf_target"), py::arg("ncmax") = 0,
      "Closed form for ncmax 0 and 1, numeric inversion otherwise.");
  m.def("min_ru", [](std::int64_t d, double pf, std::int64_t ncmax) {
        if (ncmax == 0) return analytic::min_ru_no_resolution(d, pf);
        if (ncmax == 1) return analytic::min_ru_single_resolution(d, pf);
        return numerics::optimal_reps_numeric(d, pf, ncmax).n_ru_min;
      },
      py::arg("d"), py::arg("pf_target"), py::arg("ncmax") = 0);
  m.def("min_ru_linear", &analytic::min_ru_no_resolution_linear, py::arg("d"), py::arg("pf_target"));
  m.def("optimal_reps", [](double pf, std::int64_t ncmax) {
        if (ncmax == 0) return analytic::optimal_reps_no_resolution(pf);
        if (ncmax == 1) return analytic::optimal_reps_single_resolution(pf);
        throw PreconditionError("no closed-form optimum for ncmax >= 2; use optimal_reps_numeric");
      },
      py::arg("pf_target"), py::arg("ncmax") = 0);
  m.def("single_resolution_constants", [] {
    const auto& c = analytic::single_resolution_constants();
    py::dict out;
    out["z_star"] = c.z_star;
    out["g_star"] = c.g_star;
    out["reps_factor"] = c.reps_factor;
    out["ru_factor"] = c.ru_factor;
    return out;
  });

  // Numerics
  m.def("lambert_w0", &numerics::lambert_w0, py::arg("x"));
  m.def("lambert_wm1", &numerics::lambert_wm1, py::arg("x"));
  m.def("invert_required_ru", &numerics::invert_required_ru_numeric, py::arg("n"), py::arg("d"),
        py::arg("pf_target"), py::arg("ncmax") = 0);
  m.def("optimal_reps_numeric", [](std::int64_t d, double pf, std::int64_t ncmax) {
        const auto r = numerics::optimal_reps_numeric(d, pf, ncmax);
        return py::make_tuple(r.n_star, r.n_ru_min);
      },
      py::arg("d"), py::arg("pf_target"), py::arg("ncmax") = 0,
      "Returns (n_star, n_ru_min) from an integer scan over n.");

  // Grids and sampling
  m.def("balanced_factorization", &balanced_factorization, py::arg("n_ru"), py::arg("n"));
  m.def("sample_pattern", [](const ResourceGrid& grid, std::int64_t n, const std::string& mode,
                             std::uint64_t seed, std::uint64_t stream) {
        RandomStream rng(seed, stream);
        const auto pattern = sample_pattern(grid, n, mode_arg(mode), rng);
        return std::vector<std::int64_t>(pattern.flat().begin(), pattern.flat().end());
      },
      py::arg("grid"), py::arg("n"), py::arg("mode") = "latin", py::arg("seed") = 0,
      py::arg("stream") = 0, "Sorted flat cells channel*q + slot.");

  // Monte Carlo
  m.def("simulate", [](std::int64_t n, std::int64_t d, std::int64_t ncmax,
                       std::optional<std::int64_t> n_ru, std::optional<ResourceGrid> grid,
                       const std::string& mode, std::uint64_t samples, std::uint64_t seed,
                       unsigned threads, std::uint64_t chunk) {
        const ScenarioConfig sc(d, n, 0.5, ncmax);
        const montecarlo::SimJob job{sc, grid_arg(n_ru, grid), mode_arg(mode), samples, seed, chunk};
        py::gil_scoped_release release;
        return montecarlo::estimate_failure(job, {threads});
      },
      py::arg("n"), py::arg("d"), py::arg("ncmax") = 0, py::arg("n_ru") = py::none(),
      py::arg("grid") = py::none(), py::arg("mode") = "latin", py::arg("samples") = 100000,
      py::arg("seed") = 0, py::arg("threads") = 0, py::arg("chunk") = 1u << 16);
  m.def("exact_failure", [](std::int64_t n, std::int64_t d, std::int64_t ncmax,
                            const ResourceGrid& grid, const std::string& mode) {
        return montecarlo::exact_failure_bruteforce(ScenarioConfig(d, n, 0.5, ncmax), grid,
                                                    mode_arg(mode));
      },
      py::arg("n"), py::arg("d"), py::arg("ncmax"), py::arg("grid"), py::arg("mode") = "latin",
      "Exact failure probability by full enumeration (small grids only).");
  m.def("search_min_ru", [](std::int64_t n, std::int64_t d, double pf, std::int64_t ncmax,
                            const std::string& mode, std::uint64_t samples, std::uint64_t seed,
                            unsigned threads) {
        const SampleMode m = mode_arg(mode);
        std::optional<montecarlo::SearchResult> found;
        {
          py::gil_scoped_release release;
          found = montecarlo::search_min_ru(n, d, pf, ncmax, m, samples, seed, {threads});
        }
        const auto& r = *found;
        py::dict out;
        out["n_ru"] = r.result.n_ru;
        out["grid"] = r.grid;
        out["estimate"] = r.estimate;
        out["skipped"] = r.skipped;
        out["evaluations"] = r.evaluations;
        return out;
      },
      py::arg("n"), py::arg("d"), py::arg("pf_target"), py::arg("ncmax") = 0,
      py::arg("mode") = "latin", py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 0);
}

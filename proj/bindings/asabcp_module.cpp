#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "asabcp/active_set.hpp"
#include "asabcp/bench.hpp"
#include "asabcp/problems.hpp"
#include "asabcp/solver.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

asabcp::SolverConfig make_config(const py::kwargs& kwargs) {
  asabcp::SolverConfig config;
  for (const auto& item : kwargs) {
    const std::string key = py::cast<std::string>(item.first);
    if (key == "tol") config.tol = py::cast<double>(item.second);
    else if (key == "eps0") config.eps0 = py::cast<double>(item.second);
    else if (key == "gamma") config.gamma = py::cast<double>(item.second);
    else if (key == "delta") config.delta = py::cast<double>(item.second);
    else if (key == "beta") config.beta = py::cast<double>(item.second);
    else if (key == "history_m") config.history_m = py::cast<int>(item.second);
    else if (key == "watchdog_z") config.watchdog_z = py::cast<int>(item.second);
    else if (key == "sigma1") config.sigma1 = py::cast<double>(item.second);
    else if (key == "sigma2") config.sigma2 = py::cast<double>(item.second);
    else if (key == "forcing_cap") config.forcing_cap = py::cast<double>(item.second);
    else if (key == "max_cg") config.max_cg = py::cast<long>(item.second);
    else if (key == "max_iters") config.max_iters = py::cast<long>(item.second);
    else if (key == "max_fevals") config.max_fevals = py::cast<long>(item.second);
    else if (key == "max_time_s") config.max_time_s = py::cast<double>(item.second);
    else if (key == "max_backtracks") config.max_backtracks = py::cast<int>(item.second);
    else if (key == "trace")
      config.trace_level = py::cast<bool>(item.second)
                               ? asabcp::TraceLevel::scalars
                               : asabcp::TraceLevel::none;
    else
      throw py::value_error("unknown solver option '" + key + "'");
  }
  return config;
}

py::dict trace_record_dict(const asabcp::TraceRecord& rec) {
  py::dict d;
  d["iter"] = rec.iter;
  d["f"] = rec.f;
  d["f_ref"] = rec.f_ref;
  d["stationarity"] = rec.stationarity;
  d["n_lower"] = rec.n_lower;
  d["n_upper"] = rec.n_upper;
  d["n_nonactive"] = rec.n_nonactive;
  d["alpha"] = rec.alpha;
  d["cg_iters"] = rec.cg_iters;
  d["channel"] = asabcp::to_string(rec.channel);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-stage active-set solver for smooth bound-constrained minimization";

  py::class_<asabcp::EvalCounters>(m, "EvalCounters")
      .def_readonly("n_f", &asabcp::EvalCounters::n_f)
      .def_readonly("n_g", &asabcp::EvalCounters::n_g)
      .def_readonly("n_hv", &asabcp::EvalCounters::n_hv)
      .def_readonly("cg_iters", &asabcp::EvalCounters::cg_iters)
      .def("__repr__", [](const asabcp::EvalCounters& c) {
        return "EvalCounters(n_f=" + std::to_string(c.n_f) +
               ", n_g=" + std::to_string(c.n_g) +
               ", n_hv=" + std::to_string(c.n_hv) +
               ", cg_iters=" + std::to_string(c.cg_iters) + ")";
      });

  py::class_<asabcp::ProblemInstance>(m, "Problem")
      .def_property_readonly("name",
                             [](const asabcp::ProblemInstance& p) { return p.name; })
      .def_property_readonly(
          "dimension",
          [](const asabcp::ProblemInstance& p) { return p.model.dimension(); })
      .def_property_readonly(
          "lower",
          [](const asabcp::ProblemInstance& p) { return p.bounds.lower(); })
      .def_property_readonly(
          "upper",
          [](const asabcp::ProblemInstance& p) { return p.bounds.upper(); })
      .def_property_readonly(
          "known_optimum",
          [](const asabcp::ProblemInstance& p) -> py::object {
            if (!p.known_optimum) return py::none();
            return py::make_tuple(p.known_optimum->x, p.known_optimum->f);
          })
      .def("f",
           [](const asabcp::ProblemInstance& p, const asabcp::Vector& x) {
             asabcp::EvalCounters c;
             return p.model.value(x, c);
           })
      .def("grad",
           [](const asabcp::ProblemInstance& p, const asabcp::Vector& x) {
             asabcp::EvalCounters c;
             return p.model.gradient(x, c);
           })
      .def("__repr__", [](const asabcp::ProblemInstance& p) {
        return "Problem('" + p.name + "', n=" +
               std::to_string(p.model.dimension()) + ")";
      });

  py::class_<asabcp::SolveReport>(m, "SolveReport")
      .def_property_readonly(
          "problem", [](const asabcp::SolveReport& r) { return r.problem; })
      .def_readonly("x_final", &asabcp::SolveReport::x_final)
      .def_readonly("f_final", &asabcp::SolveReport::f_final)
      .def_readonly("stationarity", &asabcp::SolveReport::stationarity)
      .def_readonly("iterations", &asabcp::SolveReport::iterations)
      .def_readonly("eps_halvings", &asabcp::SolveReport::eps_halvings)
      .def_readonly("counters", &asabcp::SolveReport::counters)
      .def_property_readonly(
          "status",
          [](const asabcp::SolveReport& r) { return std::string(to_string(r.status)); })
      .def_property_readonly("trace",
                             [](const asabcp::SolveReport& r) {
                               py::list out;
                               for (const auto& rec : r.trace) {
                                 out.append(trace_record_dict(rec));
                               }
                               return out;
                             })
      .def("__repr__", [](const asabcp::SolveReport& r) {
        return "SolveReport(status='" + std::string(to_string(r.status)) +
               "', f_final=" + std::to_string(r.f_final) +
               ", iterations=" + std::to_string(r.iterations) + ")";
      });

  m.def("builtin", &asabcp::builtin, "name"_a, "n"_a, "seed"_a = 1,
        "Named built-in problem from the registry.");
  m.def("random_qp", &asabcp::generate_random_qp, "n"_a, "seed"_a, "cond"_a,
        "Seeded random box-constrained QP with an oracle optimum attached.");
  m.def("planted_qp", &asabcp::generate_planted_qp, "n"_a, "seed"_a, "cond"_a,
        "n_lower"_a, "n_upper"_a,
        "Strictly convex QP with a planted, strictly complementary optimum.");
  m.def("load_qp", &asabcp::load_qp, "path"_a, "Load a QP text file.");
  m.def("problem_names", [] {
    std::vector<std::string> names;
    for (const auto& entry : asabcp::problem_registry()) names.push_back(entry.name);
    return names;
  });

  m.def(
      "make_problem",
      [](py::function f, py::function grad, const asabcp::Vector& lower,
         const asabcp::Vector& upper, const std::string& name,
         py::object hessvec) {
        const asabcp::Index n = lower.size();
        asabcp::ObjectiveModel::HessVecFn hv = nullptr;
        if (!hessvec.is_none()) {
          auto fn = py::cast<py::function>(hessvec);
          hv = [fn](const asabcp::Vector& x, const asabcp::Vector& v) {
            return py::cast<asabcp::Vector>(fn(x, v));
          };
        }
        asabcp::ObjectiveModel model(
            n,
            [f](const asabcp::Vector& x) { return py::cast<double>(f(x)); },
            [grad](const asabcp::Vector& x) {
              return py::cast<asabcp::Vector>(grad(x));
            },
            std::move(hv));
        return asabcp::ProblemInstance{std::move(model),
                                       asabcp::BoxBounds(lower, upper), name,
                                       std::nullopt};
      },
      "f"_a, "grad"_a, "lower"_a, "upper"_a, "name"_a = "custom",
      "hessvec"_a = py::none(),
      "Wrap Python callbacks into a bound-constrained problem.");

  m.def(
      "solve",
      [](const asabcp::ProblemInstance& problem, py::object x0,
         const py::kwargs& kwargs) {
        const asabcp::SolverConfig config = make_config(kwargs);
        if (x0.is_none()) return asabcp::solve(problem, config);
        return asabcp::solve(problem, config, py::cast<asabcp::Vector>(x0));
      },
      "problem"_a, "x0"_a = py::none(),
      "Run the two-stage active-set solver.");

  m.def(
      "projected_gradient_solve",
      [](const asabcp::ProblemInstance& problem, py::object x0,
         const py::kwargs& kwargs) {
        const asabcp::SolverConfig config = make_config(kwargs);
        if (x0.is_none()) return asabcp::projected_gradient_solve(problem, config);
        return asabcp::projected_gradient_solve(problem, config,
                                                py::cast<asabcp::Vector>(x0));
      },
      "problem"_a, "x0"_a = py::none(),
      "Run the projected-gradient baseline.");

  m.def(
      "project",
      [](const asabcp::Vector& x, const asabcp::Vector& lower,
         const asabcp::Vector& upper) {
        return asabcp::project(x, asabcp::BoxBounds(lower, upper));
      },
      "x"_a, "lower"_a, "upper"_a, "Componentwise clamp onto the box.");

  m.def(
      "stationarity_measure",
      [](const asabcp::Vector& x, const asabcp::Vector& g,
         const asabcp::Vector& lower, const asabcp::Vector& upper) {
        return asabcp::stationarity_measure(x, g, asabcp::BoxBounds(lower, upper));
      },
      "x"_a, "g"_a, "lower"_a, "upper"_a,
      "Sup-norm of x - project(x - g), zero exactly at stationary points.");

  m.def(
      "estimate_active_set",
      [](const asabcp::Vector& x, const asabcp::Vector& g,
         const asabcp::Vector& lower, const asabcp::Vector& upper, double eps) {
        const asabcp::ActiveSetPartition p = asabcp::estimate_active_set(
            x, g, asabcp::BoxBounds(lower, upper), eps);
        return py::make_tuple(p.lower_active, p.upper_active, p.nonactive);
      },
      "x"_a, "g"_a, "lower"_a, "upper"_a, "eps"_a = 1e-6,
      "Estimated (lower_active, upper_active, nonactive) index lists.");

  m.def(
      "multipliers",
      [](const asabcp::Vector& x, const asabcp::Vector& g,
         const asabcp::Vector& lower, const asabcp::Vector& upper) {
        const asabcp::MultiplierEstimates est =
            asabcp::multipliers(x, g, asabcp::BoxBounds(lower, upper));
        return py::make_tuple(est.lambda, est.mu);
      },
      "x"_a, "g"_a, "lower"_a, "upper"_a,
      "Multiplier function estimates (lambda, mu).");

#ifdef VERSION_INFO
#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}

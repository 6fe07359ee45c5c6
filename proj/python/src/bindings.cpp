#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mrn/compare.hpp"
#include "mrn/config.hpp"
#include "mrn/csv.hpp"
#include "mrn/ctmc.hpp"
#include "mrn/errors.hpp"
#include "mrn/ode.hpp"
#include "mrn/pde.hpp"
#include "mrn/random_walk.hpp"
#include "mrn/replicas.hpp"
#include "mrn/scenarios.hpp"

namespace py = pybind11;
using namespace mrn;

namespace {

// (K+1, K+1, L) array view of a field, x index first.
py::array_t<double> as_array(const DensityField& f, const LatticeGrid& g) {
  py::array_t<double> a({g.side(), g.side(), f.num_states});
  std::copy(f.values.begin(), f.values.end(), a.mutable_data());
  return a;
}

py::array_t<std::int64_t> as_array(const PopulationState& s, const LatticeGrid& g) {
  py::array_t<std::int64_t> a({g.side(), g.side(), s.num_states});
  std::copy(s.counts.begin(), s.counts.end(), a.mutable_data());
  return a;
}

Absorption absorption(const std::string& name) {
  if (name == "edge") return Absorption::Edge;
  if (name == "outside") return Absorption::Outside;
  throw std::invalid_argument("absorb must be 'edge' or 'outside'");
}

}  // namespace

PYBIND11_MODULE(_mrn, m) {
  m.doc() = "Mobile reaction networks: CTMC simulation, fluid ODE and finite-difference PDE solver";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<ParseError> parse_error(m, "ParseError", PyExc_ValueError);
  static py::exception<NumericError> numeric_error(m, "NumericError", PyExc_ArithmeticError);
  static py::exception<IoError> io_error(m, "IoError", PyExc_OSError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      std::string msg = e.what();
      for (const auto& d : e.diagnostics()) msg += "\n[" + d.rule + "] " + d.message;
      validation_error(msg.c_str());
    } catch (const ParseError& e) {
      parse_error(e.what());
    } catch (const NumericError& e) {
      numeric_error(e.what());
    } catch (const IoError& e) {
      io_error(e.what());
    }
  });

  py::class_<NetworkSpec>(m, "NetworkSpec")
      .def_readonly("states", &NetworkSpec::states)
      .def_readwrite("mu", &NetworkSpec::mu)
      .def_readwrite("horizon", &NetworkSpec::horizon)
      .def_property_readonly("num_reactions", [](const NetworkSpec& s) { return s.reactions.size(); })
      .def("to_json", &serialize_spec)
      .def("__eq__", [](const NetworkSpec& a, const NetworkSpec& b) { return a == b; });

  m.def("parse_spec", [](const std::string& text) { return parse_spec(text); }, py::arg("text"));
  m.def("load_spec", [](const std::string& path) { return load_spec(path); }, py::arg("path"));
  m.def("validate", &validate, py::arg("spec"));
  m.def("builtin_scenarios", &builtin_scenarios);
  m.def("scenario", &builtin_scenario, py::arg("name"));
  m.def("onoff_spec", &onoff_spec, py::arg("mu_off") = 0.001, py::arg("V") = 10.0, py::arg("lam") = 0.25,
        py::arg("c") = 2.857);
  m.def("heat_spec", [](double mu) { return heat_spec(mu); }, py::arg("mu") = 0.1);

  m.def(
      "initial_state",
      [](const NetworkSpec& spec, int K, int N, const std::string& absorb) {
        const LatticeGrid g(K, absorption(absorb));
        return as_array(build_initial_state(spec, g, N), g);
      },
      py::arg("spec"), py::arg("K"), py::arg("N") = 1, py::arg("absorb") = "edge");

  m.def(
      "simulate",
      [](const NetworkSpec& spec, int K, int N, double T, std::uint64_t seed, std::uint64_t stream,
         std::vector<double> times, const std::string& absorb) {
        const LatticeGrid g(K, absorption(absorb));
        std::vector<PopulationState> samples;
        {
          py::gil_scoped_release release;
          samples = simulate(spec, g, N, T, seed, stream, times);
        }
        std::vector<py::array_t<std::int64_t>> out;
        for (const auto& s : samples) out.push_back(as_array(s, g));
        return out;
      },
      py::arg("spec"), py::arg("K"), py::arg("N"), py::arg("T"), py::arg("seed"), py::arg("stream") = 0,
      py::arg("times") = std::vector<double>{}, py::arg("absorb") = "edge");

  m.def(
      "replica_fraction",
      [](const NetworkSpec& spec, int K, int N, std::size_t state, std::uint64_t seed, double ci_rel,
         std::size_t min_replicas, std::size_t cap, unsigned jobs, const std::string& absorb) {
        ReplicaPolicy p;
        p.rel_ci_target = ci_rel;
        p.min_replicas = min_replicas;
        p.replica_cap = cap;
        p.jobs = jobs;
        const LatticeGrid g(K, absorption(absorb));
        ReplicaResult r;
        {
          py::gil_scoped_release release;
          r = run_replicas(spec, g, N, spec.horizon, off_fraction_metric(state), seed, p);
        }
        return py::make_tuple(r.estimate.mean(), r.estimate.ci_halfwidth(), r.estimate.n());
      },
      py::arg("spec"), py::arg("K"), py::arg("N") = 1, py::arg("state") = 0, py::arg("seed") = 0,
      py::arg("ci_rel") = 0.05, py::arg("min_replicas") = 10, py::arg("cap") = 100000, py::arg("jobs") = 1,
      py::arg("absorb") = "edge",
      "(mean, ci_halfwidth, replicas) of the fraction of nodes in `state` at the horizon");

  m.def(
      "solve_ode",
      [](const NetworkSpec& spec, int K, double dt) {
        const LatticeGrid g(K);
        const SpatialModel model(spec, g);
        if (dt == 0.0) dt = auto_dt(spec, K, spec.horizon);
        return as_array(integrate_euler(model, initial_density(spec, g), spec.horizon, dt), g);
      },
      py::arg("spec"), py::arg("K"), py::arg("dt") = 0.0);

  m.def(
      "solve_pde",
      [](const NetworkSpec& spec, int K, double dt, bool clamp, std::size_t state) {
        FDConfig cfg;
        cfg.K = K;
        cfg.T = spec.horizon;
        cfg.delta_t = dt;
        cfg.clamp_enabled = clamp;
        PdeResult r;
        {
          py::gil_scoped_release release;
          r = solve_pde(spec, cfg);
        }
        py::dict d;
        d["fraction"] = r.fraction(state);
        d["final"] = as_array(r.final, LatticeGrid(K));
        d["delta_t"] = r.delta_t;
        d["steps"] = r.steps;
        return d;
      },
      py::arg("spec"), py::arg("K"), py::arg("dt") = 0.0, py::arg("clamp") = false, py::arg("state") = 0);

  m.def(
      "refine",
      [](const NetworkSpec& spec, std::vector<int> Ks, std::size_t state) {
        py::gil_scoped_release release;
        return convergence_csv(refine_and_compare(spec, spec.horizon, Ks, state));
      },
      py::arg("spec"), py::arg("Ks"), py::arg("state") = 0, "convergence table as CSV text");

  m.def(
      "msd",
      [](int k, double r, double t, std::size_t replicas, std::uint64_t seed) {
        const auto res = msd({k, r, t, replicas}, seed);
        return py::make_tuple(res.estimate(), res.ci_halfwidth(), res.theory);
      },
      py::arg("k") = 1, py::arg("r") = 1.0, py::arg("t") = 1.0, py::arg("replicas") = 10000, py::arg("seed") = 0,
      "(estimate, ci_halfwidth, theory) of the free walk's mean squared displacement");

  m.def("step_size_for", &step_size_for, py::arg("mu_max"), py::arg("delta_s"), py::arg("T"),
        py::arg("safety") = 0.9, py::arg("reaction_rate") = 0.0);
  m.def("auto_dt", &auto_dt, py::arg("spec"), py::arg("K"), py::arg("T"), py::arg("safety") = 0.9);
  m.def("parse_delta_s", &parse_delta_s, py::arg("text"));
}

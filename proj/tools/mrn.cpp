// mrn: command-line front end.
//
// Exit codes: 0 success, 1 validation or usage, 2 numeric failure, 3 I/O.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
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

using namespace mrn;

namespace {

struct Common {
  std::string config;
  std::string scenario;
  std::optional<int> K;
  int N = 1;
  std::optional<double> T;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string out;
  std::vector<double> snapshot_times;
  std::optional<double> mu, mu1, mu2, V;
  std::string metric_state;
  std::string amplitude_state;
  std::string absorb = "edge";
};

struct Loaded {
  NetworkSpec spec;
  std::size_t metric = 0;
};

std::size_t state_index(const NetworkSpec& spec, const std::string& name) {
  const auto it = std::find(spec.states.begin(), spec.states.end(), name);
  if (it == spec.states.end()) throw std::invalid_argument("unknown state '" + name + "'");
  return static_cast<std::size_t>(it - spec.states.begin());
}

Loaded load(const Common& c) {
  if (!c.config.empty() && !c.scenario.empty()) throw std::invalid_argument("--config and --scenario are exclusive");
  Loaded r;
  ScenarioRoles roles;
  if (!c.config.empty()) {
    r.spec = load_spec(c.config);
  } else {
    const std::string name = c.scenario.empty() ? "onoff" : c.scenario;
    r.spec = builtin_scenario(name);
    roles = scenario_roles(name);
  }
  if (!c.metric_state.empty()) roles.metric_state = state_index(r.spec, c.metric_state);
  if (!c.amplitude_state.empty()) roles.amplitude_state = state_index(r.spec, c.amplitude_state);
  ScenarioOverrides o;
  o.horizon = c.T;
  o.mu.resize(r.spec.num_states());
  if (c.mu) o.mu[0] = c.mu;
  if (c.mu1) o.mu[0] = c.mu1;
  if (c.mu2) {
    if (r.spec.num_states() < 2) throw std::invalid_argument("--mu2 needs a network with two states");
    o.mu[1] = c.mu2;
  }
  o.amplitude = c.V;
  r.spec = apply_overrides(std::move(r.spec), o, roles.amplitude_state);
  r.metric = roles.metric_state;
  return r;
}

std::uint64_t seed_of(const Common& c) {
  if (c.seed) return *c.seed;
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << s << '\n';
  return s;
}

Absorption absorption_of(const Common& c) {
  if (c.absorb == "edge") return Absorption::Edge;
  if (c.absorb == "outside") return Absorption::Outside;
  throw std::invalid_argument("--absorb must be edge or outside");
}

void emit(const Common& c, const std::string& csv) {
  if (c.out.empty()) {
    std::cout << csv;
  } else {
    write_file_atomic(c.out, csv);
  }
}

std::vector<double> snapshots(const Common& c, double T) {
  if (c.snapshot_times.empty()) return {0.0, T};
  auto t = c.snapshot_times;
  std::sort(t.begin(), t.end());
  for (double v : t) {
    if (v < 0.0 || v > T) throw std::invalid_argument("snapshot time " + format_number(v) + " outside [0, T]");
  }
  return t;
}

void add_common(CLI::App* app, Common& c, bool with_seed) {
  auto* cfg = app->add_option("--config", c.config, "network JSON document");
  app->add_option("--scenario", c.scenario, "builtin: epidemic, p2p, onoff, heat")->excludes(cfg);
  app->add_option("--K", c.K, "lattice refinement")->check(CLI::PositiveNumber);
  app->add_option("--N", c.N, "population scale")->check(CLI::PositiveNumber);
  app->add_option("--T", c.T, "horizon")->check(CLI::PositiveNumber);
  if (with_seed) {
    app->add_option("--seed", c.seed, "random seed (printed when omitted)");
    app->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
  }
  app->add_option("--out", c.out, "CSV output path (stdout when omitted)");
  app->add_option("--snapshot-times", c.snapshot_times, "comma-separated sample times")->delimiter(',');
  app->add_option("--mu,--mu1", c.mu1, "migration rate of the first state");
  app->add_option("--mu2", c.mu2, "migration rate of the second state");
  app->add_option("--V", c.V, "amplitude of the theta-shaped initial field");
  app->add_option("--metric-state", c.metric_state, "state whose fraction is reported");
  app->add_option("--V-state", c.amplitude_state, "state whose initial field --V sets");
}

struct DtFlags {
  std::string dt = "auto";
  bool auto_dt = false;
};

void add_dt(CLI::App* app, DtFlags& d) {
  auto* dt = app->add_option("--dt", d.dt, "time step: auto or a value dividing T");
  app->add_flag("--auto-dt", d.auto_dt, "pick the largest stable step")->excludes(dt);
}

double resolve_dt(const DtFlags& d, const NetworkSpec& spec, int K) {
  if (d.auto_dt || d.dt == "auto") return auto_dt(spec, K, spec.horizon);
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(d.dt, &used);
    if (used != d.dt.size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw ParseError("--dt must be auto or a number, got '" + d.dt + "'");
  }
  return v;
}

int run_validate(const Common& c) {
  const auto l = load(c);
  if (c.K) {
    const auto diags = check_boundary(l.spec, LatticeGrid(*c.K));
    if (!diags.empty()) throw ValidationError(diags);
  }
  std::cout << "valid: " << l.spec.num_states() << " states, " << l.spec.reactions.size() << " reactions\n";
  return 0;
}

struct SimFlags {
  std::size_t replicas_min = 10;
  double ci_rel = 0.05;
  std::size_t replica_cap = 100000;
};

int run_sim(const Common& c, const SimFlags& s) {
  const auto l = load(c);
  const LatticeGrid grid(c.K.value_or(7), absorption_of(c));
  const std::uint64_t seed = seed_of(c);
  const double T = l.spec.horizon;
  if (!c.snapshot_times.empty()) {
    const auto samples = simulate(l.spec, grid, c.N, T, seed, 0, snapshots(c, T));
    emit(c, trajectory_csv(grid, l.spec.states, samples));
    return 0;
  }
  ReplicaPolicy policy;
  policy.min_replicas = s.replicas_min;
  policy.rel_ci_target = s.ci_rel;
  policy.replica_cap = s.replica_cap;
  policy.jobs = c.jobs;
  const auto res = run_replicas(l.spec, grid, c.N, T, off_fraction_metric(l.metric), seed, policy);
  if (!res.converged) std::cerr << "replica cap reached before the CI target\n";
  emit(c, estimate_csv({{"fraction_" + l.spec.states[l.metric], res.estimate}}));
  return 0;
}

int run_ode(const Common& c, const DtFlags& d) {
  const auto l = load(c);
  const int K = c.K.value_or(16);
  const LatticeGrid grid(K);
  const SpatialModel model(l.spec, grid);
  const double T = l.spec.horizon;
  const double dt = resolve_dt(d, l.spec, K);
  const auto times = snapshots(c, T);
  std::vector<std::size_t> steps;
  for (double t : times) steps.push_back(static_cast<std::size_t>(std::llround(t / dt)));
  std::vector<DensityField> samples;
  const auto init = initial_density(l.spec, grid);
  const auto final = integrate_euler(model, init, T, dt, [&](std::size_t m, const DensityField& a) {
    for (std::size_t s : steps) {
      if (s == m) samples.push_back(a);
    }
  });
  std::cerr << "fraction_" << l.spec.states[l.metric] << " " << format_number(state_fraction(init, final, l.metric))
            << '\n';
  emit(c, field_csv(grid, l.spec.states, samples));
  return 0;
}

struct PdeFlags {
  std::string ds;
  std::string clamp = "off";
  std::vector<std::string> refine;
};

int run_pde(const Common& c, const DtFlags& d, const PdeFlags& p) {
  const auto l = load(c);
  if (!p.refine.empty()) {
    std::vector<int> Ks;
    for (const auto& s : p.refine) Ks.push_back(parse_delta_s(s));
    emit(c, convergence_csv(refine_and_compare(l.spec, l.spec.horizon, Ks, l.metric)));
    return 0;
  }
  if (!p.ds.empty() && c.K) throw std::invalid_argument("--ds and --K are exclusive");
  FDConfig cfg;
  cfg.K = p.ds.empty() ? c.K.value_or(256) : parse_delta_s(p.ds);
  cfg.T = l.spec.horizon;
  cfg.delta_t = resolve_dt(d, l.spec, cfg.K);
  if (p.clamp != "on" && p.clamp != "off") throw std::invalid_argument("--clamp must be on or off");
  cfg.clamp_enabled = p.clamp == "on";
  const auto res = solve_pde(l.spec, cfg, snapshots(c, cfg.T));
  std::cout << "fraction_" << l.spec.states[l.metric] << " " << format_number(res.fraction(l.metric)) << '\n';
  if (!c.out.empty()) write_file_atomic(c.out, field_csv(LatticeGrid(cfg.K), l.spec.states, res.samples));
  return 0;
}

struct CompareFlags {
  std::vector<int> N_list{1};
  std::vector<int> K_list{7, 15};
  std::string ds = "1/256";
};

int run_compare_cmd(const Common& c, const SimFlags& s, const CompareFlags& f) {
  const auto l = load(c);
  CompareOptions opt;
  opt.N_list = f.N_list;
  opt.K_list = f.K_list;
  opt.pde_K = parse_delta_s(f.ds);
  opt.absorption = absorption_of(c);
  opt.policy.min_replicas = s.replicas_min;
  opt.policy.rel_ci_target = s.ci_rel;
  opt.policy.replica_cap = s.replica_cap;
  opt.policy.jobs = c.jobs;
  opt.seed = seed_of(c);
  opt.V = c.V.value_or(0.0);
  opt.mu = l.spec.mu.empty() ? 0.0 : l.spec.mu[0];
  emit(c, sweep_csv(run_compare(l.spec, l.metric, opt)));
  return 0;
}

struct RwFlags {
  std::vector<int> k{1};
  std::vector<double> r{1.0};
  std::vector<double> t{1.0};
  std::size_t replicas = 10000;
};

int run_rwcheck(const Common& c, const RwFlags& f) {
  const std::uint64_t seed = seed_of(c);
  std::vector<RwRow> rows;
  std::uint64_t index = 0;
  for (int k : f.k) {
    for (double r : f.r) {
      for (double t : f.t) {
        const auto res = msd({k, r, t, f.replicas}, row_seed(seed, index++));
        rows.push_back({k, r, t, res.squared_distance, res.theory});
      }
    }
  }
  emit(c, rwcheck_csv(rows));
  return 0;
}

void print_diagnostics(const ValidationError& e) {
  for (const auto& d : e.diagnostics()) std::cerr << "error [" << d.rule << "]: " << d.message << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile reaction networks: CTMC simulation, fluid limits and PDE solver"};
  app.require_subcommand(1);

  Common c;
  SimFlags sim_flags;
  DtFlags dt_flags;
  PdeFlags pde_flags;
  CompareFlags cmp_flags;
  RwFlags rw_flags;

  auto* validate_cmd = app.add_subcommand("validate", "check a network document");
  add_common(validate_cmd, c, false);

  auto* sim = app.add_subcommand("sim", "CTMC replicas (or one trajectory with --snapshot-times)");
  add_common(sim, c, true);
  sim->add_option("--replicas-min", sim_flags.replicas_min)->check(CLI::PositiveNumber);
  sim->add_option("--ci-rel", sim_flags.ci_rel)->check(CLI::PositiveNumber);
  sim->add_option("--replica-cap", sim_flags.replica_cap)->check(CLI::PositiveNumber);
  sim->add_option("--absorb", c.absorb, "edge (edge regions absorb) or outside (leaving the square absorbs)");

  auto* ode = app.add_subcommand("ode", "explicit Euler on the spatial fluid ODE");
  add_common(ode, c, false);
  add_dt(ode, dt_flags);

  auto* pde = app.add_subcommand("pde", "finite-difference reaction-diffusion solver");
  add_common(pde, c, false);
  add_dt(pde, dt_flags);
  pde->add_option("--ds", pde_flags.ds, "grid spacing, e.g. 1/256");
  pde->add_option("--clamp", pde_flags.clamp, "on|off");
  pde->add_option("--refine-ds", pde_flags.refine, "grid spacings to compare")->delimiter(',');

  auto* cmp = app.add_subcommand("compare", "CTMC estimate against the PDE metric over N and K");
  add_common(cmp, c, true);
  cmp->add_option("--N-list", cmp_flags.N_list)->delimiter(',');
  cmp->add_option("--K-list", cmp_flags.K_list)->delimiter(',');
  cmp->add_option("--ds", cmp_flags.ds, "PDE reference grid spacing");
  cmp->add_option("--replicas-min", sim_flags.replicas_min)->check(CLI::PositiveNumber);
  cmp->add_option("--ci-rel", sim_flags.ci_rel)->check(CLI::PositiveNumber);
  cmp->add_option("--replica-cap", sim_flags.replica_cap)->check(CLI::PositiveNumber);
  cmp->add_option("--absorb", c.absorb, "edge or outside (CTMC lattice only)");

  auto* rw = app.add_subcommand("rwcheck", "mean squared displacement of the free walk");
  rw->add_option("--k", rw_flags.k)->delimiter(',');
  rw->add_option("--r", rw_flags.r)->delimiter(',');
  rw->add_option("--t", rw_flags.t)->delimiter(',');
  rw->add_option("--replicas", rw_flags.replicas)->check(CLI::PositiveNumber);
  rw->add_option("--seed", c.seed);
  rw->add_option("--out", c.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*validate_cmd) return run_validate(c);
    if (*sim) return run_sim(c, sim_flags);
    if (*ode) return run_ode(c, dt_flags);
    if (*pde) return run_pde(c, dt_flags, pde_flags);
    if (*cmp) return run_compare_cmd(c, sim_flags, cmp_flags);
    if (*rw) return run_rwcheck(c, rw_flags);
  } catch (const ValidationError& e) {
    print_diagnostics(e);
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what();
    if (e.line()) std::cerr << " (line " << e.line() << ", column " << e.column() << ")";
    std::cerr << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

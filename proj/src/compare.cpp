#include "mrn/compare.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mrn/csv.hpp"
#include "mrn/ctmc.hpp"
#include "mrn/pde.hpp"

namespace mrn {

std::uint64_t row_seed(std::uint64_t seed, std::uint64_t row) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (row + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<SweepRow> run_compare(const NetworkSpec& spec, std::size_t metric_state, const CompareOptions& options) {
  if (options.N_list.empty() || options.K_list.empty()) throw std::invalid_argument("N and K lists must be non-empty");
  if (metric_state >= spec.num_states()) throw std::invalid_argument("metric state out of range");
  for (int K : options.K_list) {
    if (K < 2) throw std::invalid_argument("every K must be at least 2");
  }
  for (int N : options.N_list) {
    if (N < 1) throw std::invalid_argument("every N must be positive");
  }
  FDConfig cfg;
  cfg.K = options.pde_K;
  cfg.T = spec.horizon;
  const double pde = solve_pde(spec, cfg).fraction(metric_state);

  std::vector<SweepRow> rows;
  std::uint64_t index = 0;
  for (int N : options.N_list) {
    for (int K : options.K_list) {
      const LatticeGrid grid(K, options.absorption);
      SweepRow row;
      row.N = N;
      row.K = K;
      row.V = options.V;
      row.mu = options.mu;
      row.nodes = build_initial_state(spec, grid, N).total();
      row.ctmc = run_replicas(spec, grid, N, spec.horizon, off_fraction_metric(metric_state),
                              row_seed(options.seed, index++), options.policy)
                     .estimate;
      row.pde_metric = pde;
      row.abs_error = std::abs(row.ctmc.mean() - pde);
      rows.push_back(row);
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "N,K,V,mu,nodes,ctmc_mean,ctmc_ci,pde_metric,abs_error\n";
  for (const auto& r : rows) {
    os << r.N << ',' << r.K << ',' << format_number(r.V) << ',' << format_number(r.mu) << ',' << r.nodes << ','
       << format_number(r.ctmc.mean()) << ',' << format_number(r.ctmc.ci_halfwidth()) << ','
       << format_number(r.pde_metric) << ',' << format_number(r.abs_error) << '\n';
  }
  return os.str();
}

}  // namespace mrn

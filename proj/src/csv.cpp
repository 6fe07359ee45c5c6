#include "mrn/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "mrn/errors.hpp"

namespace mrn {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move output into " + path + ": " + ec.message());
  }
}

std::string trajectory_csv(const LatticeGrid& grid, const std::vector<std::string>& states,
                           const std::vector<PopulationState>& samples) {
  std::ostringstream os;
  os << "t,region_x,region_y,state,count\n";
  for (const auto& s : samples) {
    for (RegionId r = 0; r < grid.size(); ++r) {
      for (std::size_t l = 0; l < s.num_states; ++l) {
        os << format_number(s.time) << ',' << format_number(grid.x(r)) << ',' << format_number(grid.y(r)) << ','
           << states[l] << ',' << s.at(r, l) << '\n';
      }
    }
  }
  return os.str();
}

std::string field_csv(const LatticeGrid& grid, const std::vector<std::string>& states,
                      const std::vector<DensityField>& samples) {
  std::ostringstream os;
  os << "t,region_x,region_y,state,density\n";
  for (const auto& f : samples) {
    for (RegionId r = 0; r < grid.size(); ++r) {
      for (std::size_t l = 0; l < f.num_states; ++l) {
        os << format_number(f.time) << ',' << format_number(grid.x(r)) << ',' << format_number(grid.y(r)) << ','
           << states[l] << ',' << format_number(f.at(r, l)) << '\n';
      }
    }
  }
  return os.str();
}

std::string estimate_csv(const std::vector<EstimateRow>& rows) {
  std::ostringstream os;
  os << "metric,mean,ci_low,ci_high,replicas\n";
  for (const auto& r : rows) {
    os << r.metric << ',' << format_number(r.estimate.mean()) << ',' << format_number(r.estimate.ci_low()) << ','
       << format_number(r.estimate.ci_high()) << ',' << r.estimate.n() << '\n';
  }
  return os.str();
}

std::string convergence_csv(const std::vector<RefinementRow>& rows) {
  std::ostringstream os;
  os << "ds_coarse,ds_fine,sup_norm_diff,metric_rel_diff\n";
  for (const auto& r : rows) {
    os << format_number(r.ds_coarse) << ',' << format_number(r.ds_fine) << ',' << format_number(r.sup_norm_diff)
       << ',' << format_number(r.metric_rel_diff) << '\n';
  }
  return os.str();
}

std::string rwcheck_csv(const std::vector<RwRow>& rows) {
  std::ostringstream os;
  os << "k,r,t,msd,ci_low,ci_high,theory\n";
  for (const auto& r : rows) {
    os << r.k << ',' << format_number(r.r) << ',' << format_number(r.t) << ',' << format_number(r.msd.mean()) << ','
       << format_number(r.msd.ci_low()) << ',' << format_number(r.msd.ci_high()) << ',' << format_number(r.theory)
       << '\n';
  }
  return os.str();
}

}  // namespace mrn

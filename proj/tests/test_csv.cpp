#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mrn/csv.hpp"
#include "mrn/errors.hpp"
#include "mrn/scenarios.hpp"

using namespace mrn;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("csv headers") {
  const LatticeGrid g(2);
  const auto spec = onoff_spec();
  CHECK(first_line(trajectory_csv(g, spec.states, {build_initial_state(spec, g, 1)})) ==
        "t,region_x,region_y,state,count");
  CHECK(first_line(field_csv(g, spec.states, {initial_density(spec, g)})) == "t,region_x,region_y,state,density");
  CHECK(first_line(estimate_csv({})) == "metric,mean,ci_low,ci_high,replicas");
  CHECK(first_line(convergence_csv({})) == "ds_coarse,ds_fine,sup_norm_diff,metric_rel_diff");
  CHECK(first_line(rwcheck_csv({})) == "k,r,t,msd,ci_low,ci_high,theory");
}

TEST_CASE("field csv has one row per region and state") {
  const LatticeGrid g(3);
  const auto spec = onoff_spec();
  const auto text = field_csv(g, spec.states, {initial_density(spec, g)});
  std::istringstream in(text);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 16 * 2);
  CHECK(text.find("\n0,0,0,off,0\n") != std::string::npos);
}

TEST_CASE("numbers round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(3.0) == "3");
  CHECK(std::stod(format_number(1.0 / 3)) == 1.0 / 3);
}

TEST_CASE("atomic write") {
  const auto dir = std::filesystem::temp_directory_path() / "mrn_csv_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.csv").string();
  write_file_atomic(path, "a,b\n1,2\n");
  write_file_atomic(path, "a,b\n3,4\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "a,b\n3,4\n");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
  CHECK_THROWS_AS(write_file_atomic("/nonexistent-dir/x.csv", "x"), IoError);
}

#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "adnoma/jobs.hpp"
#include "json.hpp"

using namespace adnoma;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("adnoma_test_jobs_" + name);
  fs::remove_all(dir);
  return dir;
}

OutputManifest run(const std::string& text, const fs::path& dir, bool trace = false) {
  RunOptions opts;
  opts.out_dir = dir;
  opts.trace = trace;
  return run_job(parse_config(text), opts);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_probability(0.1) == "0.10000000000000001");
  CHECK(format_probability(1.0) == "1");
  CHECK(format_age(48.65349) == "48.6535");
  CHECK(format_age(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("analytic job writes its files and manifest") {
  const auto dir = scratch("analytic");
  const auto m = run("job = analytic\nN = 30\nK = 2\nL = 2\neps_u = 0.3\np = 0.067\ndelta = 38\n", dir);
  CHECK(m.complete);
  CHECK(m.failed_cells == 0);
  for (const char* f : {"analytic.csv", "legend.txt", "resolved.cfg", "manifest.json"}) CHECK(fs::exists(dir / f));

  const auto csv = lines(slurp(dir / "analytic.csv"));
  REQUIRE(csv.size() == 2);
  CHECK(csv[0] == "N,K,L,eps_u,p,delta,q,theta,aaoi,converged,iterations,residual");
  CHECK(csv[1].rfind("30,2,2,0.29999999999999999,0.067000000000000004,38,", 0) == 0);

  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["job"] == "analytic");
  CHECK(j["complete"] == true);
  bool scheme_default = false;
  for (const auto& e : j["config"])
    if (e["key"] == "scheme") scheme_default = e["default"] && e["value"] == "noma_mr";
  CHECK(scheme_default);
  CHECK(j["files"].size() == m.files.size());
  for (const auto& f : m.files) CHECK(fs::file_size(dir / f.name) == f.bytes);

  for (const auto& entry : fs::directory_iterator(dir)) CHECK(entry.path().extension() != ".tmp");
}

TEST_CASE("reruns are byte-identical") {
  const std::string text = "job = optimize\nN = 10\nK = 3\nL = 2\np_points = 11\ndelta_max = 30\n";
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  const auto ma = run(text, a);
  const auto mb = run(text, b);
  REQUIRE(ma.files.size() == mb.files.size());
  for (std::size_t i = 0; i < ma.files.size(); ++i) {
    CHECK(ma.files[i].name == mb.files[i].name);
    CHECK(ma.files[i].crc32 == mb.files[i].crc32);
    CHECK(slurp(a / ma.files[i].name) == slurp(b / mb.files[i].name));
  }
  const auto grid = lines(slurp(a / "grid.csv"));
  CHECK(grid.size() == 1 + 11 * 30);
  CHECK(grid[1].find(",inf,") != std::string::npos);
}

TEST_CASE("non-convergence marks the job incomplete") {
  const auto dir = scratch("noconv");
  const auto m = run("job = analytic\nN = 30\nK = 2\nL = 2\np = 0.067\ndelta = 38\nmax_iter = 1\n", dir);
  CHECK_FALSE(m.complete);
  CHECK(m.failed_cells == 1);
  CHECK(fs::exists(dir / "analytic.csv"));
  const auto j = nlohmann::json::parse(slurp(dir / "manifest.json"));
  CHECK(j["complete"] == false);
  CHECK(j["notes"].size() == 1);
}

TEST_CASE("simulate job outputs and traces") {
  const auto dir = scratch("simulate");
  const auto m = run("job = simulate\nN = 4\nK = 2\nL = 2\np = 0.3\ndelta = 3\nhorizon = 2000\nwarmup = 100\n"
                     "seeds = 1..3\n",
                     dir, true);
  CHECK(m.complete);
  const auto reps = lines(slurp(dir / "simulate.csv"));
  CHECK(reps.size() == 4);
  CHECK(reps[0] == "seed,N,K,L,eps_u,p,delta,slots,network_aaoi,success_rate");
  CHECK(lines(slurp(dir / "per_user.csv")).size() == 5);
  for (int s = 1; s <= 3; ++s) {
    const auto trace = lines(slurp(dir / ("trace_seed" + std::to_string(s) + ".txt")));
    CHECK(trace.size() == 2000);
  }
  const auto summary = lines(slurp(dir / "simulate_summary.csv"));
  REQUIRE(summary.size() == 2);
  CHECK(summary[1].rfind("4,2,2,", 0) == 0);
}

TEST_CASE("table1 layout") {
  const auto dir = scratch("table1");
  const auto m = run("job = table1\nN = 6\nK_max = 3\nL_set = 1, 2, inf\np_points = 11\ndelta_max = 20\n", dir);
  CHECK(m.complete);
  const auto t = lines(slurp(dir / "table1.csv"));
  REQUIRE(t.size() == 4);
  CHECK(t[0] == "L,K1,K2,K3,best_K,best_delta");
  CHECK(t[3].rfind("inf,", 0) == 0);
  CHECK(lines(slurp(dir / "table1_cells.csv")).size() == 1 + 3 * 3);
}

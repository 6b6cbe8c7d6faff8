#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "adnoma/config.hpp"
#include "adnoma/jobs.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Age-dependent NOMA multi-relay slotted ALOHA: analysis, simulation and optimization"};
  std::string config_path;
  std::string out_dir = "out";
  int jobs = 0;
  std::uint64_t seed_offset = 0;
  bool trace = false;
  app.add_option("--config", config_path, "experiment config (key = value)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--seed-offset", seed_offset, "added to every configured seed");
  app.add_flag("--trace", trace, "write per-slot trace files (simulate job)");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  if (jobs > 0) omp_set_num_threads(jobs);
#endif

  std::ifstream in(config_path);
  std::stringstream text;
  text << in.rdbuf();

  adnoma::ExperimentConfig cfg;
  try {
    cfg = adnoma::parse_config(text.str());
  } catch (const adnoma::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  adnoma::RunOptions opts;
  opts.out_dir = out_dir;
  opts.seed_offset = seed_offset;
  opts.trace = trace;
  try {
    const auto manifest = adnoma::run_job(cfg, opts);
    for (const auto& f : manifest.files) std::cout << (opts.out_dir / f.name).string() << '\n';
    for (const auto& n : manifest.notes) std::cerr << "note: " << n << '\n';
    if (!manifest.complete) {
      std::cerr << "job incomplete: " << manifest.failed_cells << " failed cells\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

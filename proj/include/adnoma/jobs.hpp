#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "adnoma/config.hpp"

namespace adnoma {

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::uint64_t seed_offset = 0;  // added to every configured seed
  bool trace = false;             // per-slot trace files for simulate
};

struct EmittedFile {
  std::string name;  // relative to out_dir
  std::uintmax_t bytes = 0;
  std::uint32_t crc32 = 0;
};

struct OutputManifest {
  std::string job;
  std::vector<EmittedFile> files;
  std::string config_snapshot;  // to_config_text of the resolved config
  bool complete = true;         // every cell converged, every replication ran
  int failed_cells = 0;
  std::vector<std::string> notes;
};

/// Runs one job, writing CSV outputs, a column legend, `resolved.cfg` and
/// `manifest.json` into opts.out_dir. Each file is written to a temporary
/// name and renamed into place. Failed cells are recorded, not thrown.
OutputManifest run_job(const ExperimentConfig& config, const RunOptions& opts);

/// Probabilities get 17 significant digits, ages 6; "inf" for infinities.
std::string format_probability(double v);
std::string format_age(double v);

}  // namespace adnoma

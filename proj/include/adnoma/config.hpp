#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adnoma/fixed_point.hpp"
#include "adnoma/model.hpp"
#include "adnoma/optimizer.hpp"
#include "adnoma/sim.hpp"

namespace adnoma {

enum class JobKind { Analytic, Simulate, Validate, Optimize, SweepRelays, SweepErasure, Table1 };

std::string_view to_string(JobKind kind);
JobKind job_from_string(std::string_view s);

struct ResolvedEntry {
  std::string key;
  std::string value;
  bool defaulted = false;
};

/// A fully validated experiment. `resolved` lists every key the job reads,
/// in a fixed order, with the value in effect and whether it was defaulted;
/// formatting it back with `to_config_text` yields an equivalent config.
struct ExperimentConfig {
  JobKind job = JobKind::Analytic;
  ModelParams params;
  FixedPointOptions fixed_point;
  bool warm_start = true;

  // simulation
  std::int64_t horizon = 2'000'000;
  std::optional<std::int64_t> warmup;  // default_warmup(delta) when unset
  std::vector<std::uint64_t> seeds;
  std::optional<double> gamma_target;
  std::optional<double> noise;

  // grids
  int p_points = 201;
  int delta_min = 1;
  int delta_max = 100;
  int k_min = 1;
  int k_max = 8;
  std::vector<int> level_set;
  std::vector<double> eps_grid;

  std::vector<ResolvedEntry> resolved;

  GridSpec grid() const { return GridSpec::standard(params.users, p_points, delta_min, delta_max); }
  SimConfig sim_config(const ModelParams& at) const;
};

/// Parses flat "key = value" text with '#' comments. Unknown keys and
/// duplicates are rejected; range errors name the key (ParameterError).
ExperimentConfig parse_config(std::string_view text);

std::string to_config_text(const ExperimentConfig& config);

}  // namespace adnoma

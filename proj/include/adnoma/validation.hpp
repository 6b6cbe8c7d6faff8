#pragma once

#include <functional>

#include "adnoma/optimizer.hpp"
#include "adnoma/sim.hpp"

namespace adnoma {

/// Analytic optimum of one (K, L) cell checked against a simulation
/// campaign run at the optimal (p, delta).
struct ValidationRow {
  OptimumRecord optimum;
  double analytic_aaoi = 0.0;
  SimStats sim;
  double rel_error = 0.0;  // |sim - analytic| / analytic
  bool in_ci = false;      // analytic within sim.network_aaoi ± ci_halfwidth
};

/// `make_sim` builds the simulation config for the optimized parameters
/// (horizon, warmup, seeds). Uses run_campaign for >= 2 seeds.
ValidationRow validate_cell(const ModelParams& cell, const GridSpec& grid, const OptimizeOptions& opts,
                            const std::function<SimConfig(const ModelParams&)>& make_sim);

}  // namespace adnoma

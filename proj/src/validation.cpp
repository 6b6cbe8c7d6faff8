#include "adnoma/validation.hpp"

#include <cmath>

namespace adnoma {

ValidationRow validate_cell(const ModelParams& cell, const GridSpec& grid, const OptimizeOptions& opts,
                            const std::function<SimConfig(const ModelParams&)>& make_sim) {
  ValidationRow v;
  v.optimum = optimize_p_delta(cell, grid, opts);
  v.analytic_aaoi = v.optimum.best_aaoi;

  ModelParams at = cell;
  at.p = v.optimum.best_p;
  at.delta = v.optimum.best_delta;
  const SimConfig sc = make_sim(at);
  v.sim = sc.seeds.size() >= 2 ? run_campaign(sc) : aggregate({run_replication(sc, sc.seeds.front())});
  v.rel_error = std::abs(v.sim.network_aaoi - v.analytic_aaoi) / v.analytic_aaoi;
  v.in_ci = std::abs(v.sim.network_aaoi - v.analytic_aaoi) <= v.sim.ci_halfwidth;
  return v;
}

}  // namespace adnoma

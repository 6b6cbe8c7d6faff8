#include "adnoma/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace adnoma {

std::string level_label(int levels) {
  return levels == kInfiniteLevels ? std::string("inf") : std::to_string(levels);
}

ModelParams with_levels(ModelParams base, int levels) {
  if (levels == kInfiniteLevels) {
    base.scheme = Scheme::IdealPhase2;
    base.levels = 1;
  } else {
    if (levels < 1) throw ParameterError("L", "must be >= 1 or inf");
    base.scheme = Scheme::NomaMr;
    base.levels = levels;
  }
  return base;
}

GridSpec GridSpec::standard(int users, int points, int delta_min, int delta_max) {
  if (users < 1) throw ParameterError("N", "must be >= 1");
  if (points < 1) throw ParameterError("p_points", "must be >= 1");
  GridSpec g;
  g.delta_min = delta_min;
  g.delta_max = delta_max;
  const double p_max = std::min(1.0, 2.0 / users);
  g.p_grid.reserve(static_cast<std::size_t>(points));
  if (points == 1) {
    g.p_grid.push_back(p_max);
  } else {
    for (int i = 0; i < points; ++i) g.p_grid.push_back(p_max * i / (points - 1));
    g.p_grid.back() = p_max;
  }
  return g;
}

void GridSpec::validate(int users) const {
  if (p_grid.empty()) throw ParameterError("p_points", "p grid is empty");
  if (delta_min < 1) throw ParameterError("delta_min", "must be >= 1");
  if (delta_max < delta_min) throw ParameterError("delta_max", "must be >= delta_min");
  const double p_max = std::min(1.0, 2.0 / users);
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0 && p_grid[i] <= p_max * (1.0 + 1e-12)))
      throw ParameterError("p_grid", "values must lie in [0, 2/N]");
    if (i > 0 && !(p_grid[i] > p_grid[i - 1])) throw ParameterError("p_grid", "values must be ascending");
  }
}

namespace {

void evaluate_row(const SuccessModel& model, ModelParams params, const GridSpec& grid, std::size_t row,
                  const OptimizeOptions& opts, std::span<GridCell> out) {
  params.p = grid.p_grid[row];
  FixedPointOptions fp_opts = opts.fixed_point;
  for (int d = grid.delta_min; d <= grid.delta_max; ++d) {
    GridCell& cell = out[static_cast<std::size_t>(d - grid.delta_min)];
    cell.p = params.p;
    cell.delta = d;
    if (!(params.p > 0.0)) {
      cell.reachable = false;
      cell.fp = FixedPointResult{};
      cell.fp.aaoi = std::numeric_limits<double>::infinity();
      cell.fp.converged = true;
      continue;
    }
    params.delta = d;
    cell.fp = solve_fixed_point(model, params, fp_opts);
    cell.reachable = std::isfinite(cell.fp.aaoi);
    fp_opts.initial_q = opts.warm_start && cell.fp.converged ? cell.fp.q_star : opts.fixed_point.initial_q;
  }
}

void prepare(const ModelParams& base, const GridSpec& grid) {
  ModelParams check = base;
  check.p = 1.0;
  check.delta = 1;
  check.validate();
  grid.validate(base.users);
}

}  // namespace

std::vector<GridCell> evaluate_grid(const ModelParams& base, const GridSpec& grid, const OptimizeOptions& opts) {
  prepare(base, grid);
  const SuccessModel model(base);
  std::vector<GridCell> cells(grid.size());
  const auto width = static_cast<std::size_t>(grid.delta_count());
  const auto rows = static_cast<std::int64_t>(grid.p_grid.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t r = 0; r < rows; ++r) {
    const auto row = static_cast<std::size_t>(r);
    evaluate_row(model, base, grid, row, opts, std::span(cells).subspan(row * width, width));
  }
  return cells;
}

std::vector<GridCell> evaluate_grid_serial(const ModelParams& base, const GridSpec& grid,
                                           const OptimizeOptions& opts) {
  prepare(base, grid);
  const SuccessModel model(base);
  std::vector<GridCell> cells(grid.size());
  const auto width = static_cast<std::size_t>(grid.delta_count());
  for (std::size_t row = 0; row < grid.p_grid.size(); ++row)
    evaluate_row(model, base, grid, row, opts, std::span(cells).subspan(row * width, width));
  return cells;
}

OptimumRecord select_optimum(const ModelParams& base, std::vector<GridCell> surface, bool keep_surface) {
  OptimumRecord rec;
  rec.relays = base.relays;
  rec.levels = base.scheme == Scheme::IdealPhase2 ? kInfiniteLevels : base.levels;
  rec.eps_u = base.eps_u;
  const GridCell* best = nullptr;
  for (const GridCell& c : surface) {
    ++rec.evaluated;
    if (!c.fp.converged) {
      ++rec.failed;
      continue;
    }
    if (!c.reachable) {
      ++rec.unreachable;
      continue;
    }
    if (!best || c.fp.aaoi < best->fp.aaoi ||
        (c.fp.aaoi == best->fp.aaoi && (c.delta < best->delta || (c.delta == best->delta && c.p < best->p))))
      best = &c;
  }
  if (!best)
    throw OptimizationError("no converged, reachable grid cell for K=" + std::to_string(rec.relays) +
                            ", L=" + level_label(rec.levels));
  rec.best_p = best->p;
  rec.best_delta = best->delta;
  rec.best_aaoi = best->fp.aaoi;
  rec.best_q = best->fp.q_star;
  rec.best_theta = best->fp.theta_star;
  if (keep_surface) rec.surface = std::move(surface);
  return rec;
}

OptimumRecord optimize_p_delta(const ModelParams& base, const GridSpec& grid, const OptimizeOptions& opts) {
  return select_optimum(base, evaluate_grid(base, grid, opts), opts.keep_surface);
}

double gain_ratio(const OptimumRecord& candidate, const OptimumRecord& baseline) {
  return baseline.best_aaoi / candidate.best_aaoi;
}

double gain_percent(const OptimumRecord& candidate, const OptimumRecord& baseline) {
  return 100.0 * (gain_ratio(candidate, baseline) - 1.0);
}

RelaySweep sweep_relays(const ModelParams& base, const std::vector<int>& levels, const GridSpec& grid, int k_min,
                        int k_max, const OptimizeOptions& opts) {
  if (levels.empty()) throw ParameterError("L_set", "at least one level count is required");
  if (k_min < 1) throw ParameterError("K_min", "must be >= 1");
  if (k_max < k_min) throw ParameterError("K_max", "must be >= K_min");

  RelaySweep sweep;
  for (int k = k_min; k <= k_max; ++k) {
    ModelParams at_k = base;
    at_k.relays = k;
    SweepRow row;
    row.x = k;
    row.levels = levels;
    for (int l : levels) row.per_level.push_back(optimize_p_delta(with_levels(at_k, l), grid, opts));
    const auto one = std::find(levels.begin(), levels.end(), 1);
    row.baseline = one != levels.end() ? row.per_level[static_cast<std::size_t>(one - levels.begin())]
                                       : optimize_p_delta(with_levels(at_k, 1), grid, opts);
    for (const auto& rec : row.per_level) row.gain_ratio.push_back(gain_ratio(rec, row.baseline));
    sweep.rows.push_back(std::move(row));
  }

  for (std::size_t li = 0; li < levels.size(); ++li) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < sweep.rows.size(); ++r) {
      if (sweep.rows[r].per_level[li].best_aaoi < sweep.rows[best].per_level[li].best_aaoi) best = r;
    }
    sweep.best_row.push_back(best);
  }
  return sweep;
}

const OptimumRecord& overall_optimum(const RelaySweep& sweep, std::size_t level_index) {
  return sweep.rows.at(sweep.best_row.at(level_index)).per_level.at(level_index);
}

std::vector<SweepRow> sweep_erasure(const ModelParams& base, const std::vector<int>& levels,
                                    const std::vector<double>& eps_grid, const GridSpec& grid, int k_min, int k_max,
                                    const OptimizeOptions& opts) {
  if (eps_grid.empty()) throw ParameterError("eps_grid", "must not be empty");
  for (double e : eps_grid) {
    if (!(e > 0.0 && e < 1.0)) throw ParameterError("eps_grid", "values must lie in (0, 1)");
  }

  std::vector<int> with_baseline = levels;
  if (std::find(levels.begin(), levels.end(), 1) == levels.end()) with_baseline.push_back(1);
  const auto baseline_index =
      static_cast<std::size_t>(std::find(with_baseline.begin(), with_baseline.end(), 1) - with_baseline.begin());

  std::vector<SweepRow> rows;
  for (double e : eps_grid) {
    ModelParams at_eps = base;
    at_eps.eps_u = e;
    const RelaySweep rs = sweep_relays(at_eps, with_baseline, grid, k_min, k_max, opts);
    SweepRow row;
    row.x = e;
    row.levels = levels;
    row.baseline = overall_optimum(rs, baseline_index);
    for (std::size_t li = 0; li < levels.size(); ++li) {
      row.per_level.push_back(overall_optimum(rs, li));
      row.gain_ratio.push_back(gain_ratio(row.per_level.back(), row.baseline));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace adnoma

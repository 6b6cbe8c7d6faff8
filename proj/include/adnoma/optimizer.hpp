#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "adnoma/fixed_point.hpp"
#include "adnoma/model.hpp"

namespace adnoma {

/// Level count used in level lists to denote the L -> inf limit, which is
/// evaluated with Scheme::IdealPhase2.
inline constexpr int kInfiniteLevels = 0;

/// "inf" for kInfiniteLevels, the number otherwise.
std::string level_label(int levels);

/// `base` with the phase-2 model for `levels` (NomaMr, or IdealPhase2 for
/// kInfiniteLevels).
ModelParams with_levels(ModelParams base, int levels);

struct GridSpec {
  std::vector<double> p_grid;  // ascending, within [0, 2/N]
  int delta_min = 1;
  int delta_max = 100;

  /// `points` uniform values on [0, 2/N], both endpoints included.
  static GridSpec standard(int users, int points = 201, int delta_min = 1, int delta_max = 100);

  void validate(int users) const;
  int delta_count() const { return delta_max - delta_min + 1; }
  std::size_t size() const { return p_grid.size() * static_cast<std::size_t>(delta_count()); }
};

struct GridCell {
  double p = 0.0;
  int delta = 1;
  bool reachable = true;  // false when p·q* = 0 (aaoi infinite)
  FixedPointResult fp;
};

struct OptimumRecord {
  int relays = 1;
  int levels = 1;  // kInfiniteLevels for the ideal phase 2
  double eps_u = 0.0;
  double best_p = 0.0;
  int best_delta = 1;
  double best_aaoi = 0.0;
  double best_q = 0.0;
  double best_theta = 1.0;
  int evaluated = 0;
  int failed = 0;       // cells that did not converge
  int unreachable = 0;  // cells with p·q* = 0
  std::vector<GridCell> surface;  // row-major [p][delta] when requested
};

class OptimizationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct OptimizeOptions {
  FixedPointOptions fixed_point;
  bool warm_start = true;  // seed each cell from the previous delta in its p row
  bool keep_surface = false;
};

/// Row-major [p][delta] surface, p rows evaluated in parallel (OpenMP).
std::vector<GridCell> evaluate_grid(const ModelParams& base, const GridSpec& grid,
                                    const OptimizeOptions& opts = {});

/// Single-threaded reference for evaluate_grid, identical output.
std::vector<GridCell> evaluate_grid_serial(const ModelParams& base, const GridSpec& grid,
                                           const OptimizeOptions& opts = {});

/// Exact argmin over a surface. Ties go to the smaller delta, then the
/// smaller p. Non-converged and unreachable cells are skipped and counted.
/// Throws OptimizationError when no cell qualifies.
OptimumRecord select_optimum(const ModelParams& base, std::vector<GridCell> surface, bool keep_surface);

/// Grid search over (p, delta) for fixed (N, K, L, eps_u). base.p and
/// base.delta are ignored.
OptimumRecord optimize_p_delta(const ModelParams& base, const GridSpec& grid, const OptimizeOptions& opts = {});

/// One value of the independent variable (K or eps_u) with an optimum per
/// level count and the AAoI ratio of the L=1 baseline to each of them.
struct SweepRow {
  double x = 0.0;
  std::vector<int> levels;
  std::vector<OptimumRecord> per_level;
  OptimumRecord baseline;            // L = 1 at the same x
  std::vector<double> gain_ratio;    // baseline.best_aaoi / per_level[i].best_aaoi
};

struct RelaySweep {
  std::vector<SweepRow> rows;  // one per K, ascending
  /// Per level: index into `rows` of the overall optimum over K (ties to the
  /// smaller K).
  std::vector<std::size_t> best_row;
};

/// AAoI ratio baseline / candidate.
double gain_ratio(const OptimumRecord& candidate, const OptimumRecord& baseline);

/// Relative AAoI improvement over the baseline in percent,
/// 100·(baseline/candidate - 1).
double gain_percent(const OptimumRecord& candidate, const OptimumRecord& baseline);

/// Optimizes every (K, L) with K in [k_min, k_max]; base supplies N, eps_u.
RelaySweep sweep_relays(const ModelParams& base, const std::vector<int>& levels, const GridSpec& grid,
                        int k_min = 1, int k_max = 8, const OptimizeOptions& opts = {});

/// For each eps_u: the overall optimum over K in [k_min, k_max] for every
/// level count and for the L=1 baseline.
std::vector<SweepRow> sweep_erasure(const ModelParams& base, const std::vector<int>& levels,
                                    const std::vector<double>& eps_grid, const GridSpec& grid,
                                    int k_min = 1, int k_max = 8, const OptimizeOptions& opts = {});

/// Overall optimum over K of level `level_index` in a relay sweep.
const OptimumRecord& overall_optimum(const RelaySweep& sweep, std::size_t level_index);

}  // namespace adnoma

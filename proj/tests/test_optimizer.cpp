#include "doctest.h"

#include <cmath>
#include <limits>

#include "adnoma/optimizer.hpp"

using namespace adnoma;
using doctest::Approx;

namespace {

ModelParams base(int users, int relays, double eps_u) {
  ModelParams m;
  m.users = users;
  m.relays = relays;
  m.levels = 1;
  m.eps_u = eps_u;
  return m;
}

GridCell cell(double p, int delta, double aaoi) {
  GridCell c;
  c.p = p;
  c.delta = delta;
  c.fp.aaoi = aaoi;
  c.fp.converged = true;
  c.fp.q_star = 0.5;
  return c;
}

}  // namespace

TEST_CASE("standard grid") {
  const auto g = GridSpec::standard(30);
  REQUIRE(g.p_grid.size() == 201);
  CHECK(g.p_grid.front() == 0.0);
  CHECK(g.p_grid.back() == 2.0 / 30);
  CHECK(g.size() == 201 * 100);
  CHECK(GridSpec::standard(1).p_grid.back() == 1.0);
  auto bad = g;
  bad.delta_min = 0;
  CHECK_THROWS_AS(bad.validate(30), ParameterError);
  bad = g;
  bad.p_grid.push_back(0.5);
  CHECK_THROWS_AS(bad.validate(30), ParameterError);
}

TEST_CASE("lossless single user prefers the largest p and no waiting") {
  const auto rec = optimize_p_delta(base(1, 1, 0.0), GridSpec::standard(1, 11));
  CHECK(rec.best_delta == 1);
  CHECK(rec.best_p == 1.0);
  CHECK(rec.best_aaoi == Approx(1.0));
}

TEST_CASE("optimum is the exact argmin of the surface") {
  auto m = with_levels(base(12, 3, 0.4), 2);
  const auto grid = GridSpec::standard(12, 21, 1, 30);
  OptimizeOptions opts;
  opts.keep_surface = true;
  const auto rec = optimize_p_delta(m, grid, opts);
  REQUIRE(rec.surface.size() == grid.size());
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : rec.surface)
    if (c.reachable && c.fp.converged) best = std::min(best, c.fp.aaoi);
  CHECK(rec.best_aaoi == best);
  CHECK(rec.unreachable == grid.delta_count());
  CHECK(rec.evaluated == static_cast<int>(grid.size()));

  m.p = rec.best_p;
  m.delta = rec.best_delta;
  CHECK(solve_fixed_point(m).aaoi == Approx(rec.best_aaoi).epsilon(1e-9));
}

TEST_CASE("warm start and parallel evaluation agree with the references") {
  const auto m = with_levels(base(20, 4, 0.3), 3);
  const auto grid = GridSpec::standard(20, 31, 1, 60);
  OptimizeOptions cold;
  cold.warm_start = false;
  const auto warm_cells = evaluate_grid_serial(m, grid);
  const auto cold_cells = evaluate_grid_serial(m, grid, cold);
  const auto par_cells = evaluate_grid(m, grid);
  REQUIRE(warm_cells.size() == cold_cells.size());
  for (std::size_t i = 0; i < warm_cells.size(); ++i) {
    REQUIRE(warm_cells[i].reachable == cold_cells[i].reachable);
    CHECK(par_cells[i].fp.q_star == warm_cells[i].fp.q_star);
    CHECK(par_cells[i].fp.aaoi == warm_cells[i].fp.aaoi);
    if (warm_cells[i].reachable) CHECK(std::abs(warm_cells[i].fp.q_star - cold_cells[i].fp.q_star) <= 1e-9);
  }
}

TEST_CASE("ties go to the smaller delta, then the smaller p") {
  const auto m = base(5, 1, 0.2);
  auto rec = select_optimum(m, {cell(0.1, 3, 4.0), cell(0.2, 2, 4.0), cell(0.3, 2, 4.0), cell(0.1, 5, 5.0)}, false);
  CHECK(rec.best_delta == 2);
  CHECK(rec.best_p == 0.2);

  auto bad = cell(0.05, 1, 1.0);
  bad.fp.converged = false;
  auto dead = cell(0.0, 1, std::numeric_limits<double>::infinity());
  dead.reachable = false;
  rec = select_optimum(m, {bad, dead, cell(0.3, 4, 7.0)}, false);
  CHECK(rec.best_aaoi == 7.0);
  CHECK(rec.failed == 1);
  CHECK(rec.unreachable == 1);
  CHECK_THROWS_AS(select_optimum(m, {bad, dead}, false), OptimizationError);
}

TEST_CASE("reference cells of the N=30 network") {
  const auto grid = GridSpec::standard(30);
  const auto oma = optimize_p_delta(with_levels(base(30, 1, 0.3), 1), grid);
  CHECK(oma.best_delta == 47);
  CHECK(oma.best_p == Approx(2.0 / 30).epsilon(1e-12));
  const auto noma = optimize_p_delta(with_levels(base(30, 2, 0.3), 2), grid);
  CHECK(noma.best_delta == 38);
  CHECK(noma.best_aaoi < oma.best_aaoi);
}

TEST_CASE("sweep monotonicity") {
  const auto grid = GridSpec::standard(30, 41);
  const std::vector<int> levels{1, 2, 4, kInfiniteLevels};
  const auto sweep = sweep_relays(base(30, 1, 0.3), levels, grid, 1, 6);
  REQUIRE(sweep.rows.size() == 6);
  for (const auto& row : sweep.rows) {
    for (std::size_t i = 1; i < levels.size(); ++i)
      CHECK(row.per_level[i].best_aaoi <= row.per_level[i - 1].best_aaoi * (1 + 1e-12));
    CHECK(row.gain_ratio[0] == 1.0);
    CHECK(gain_percent(row.per_level[0], row.baseline) == 0.0);
  }
  for (std::size_t k = 1; k < sweep.rows.size(); ++k)
    CHECK(sweep.rows[k].per_level[3].best_aaoi <= sweep.rows[k - 1].per_level[3].best_aaoi);
  // The ideal phase 2 keeps improving with K, so its best is the largest K.
  CHECK(sweep.best_row[3] == 5);
  CHECK(overall_optimum(sweep, 0).relays == 1);
  CHECK(level_label(kInfiniteLevels) == "inf");
  CHECK(level_label(16) == "16");
}

TEST_CASE("erasure sweep carries its own baseline") {
  const auto grid = GridSpec::standard(10, 21, 1, 40);
  const auto rows = sweep_erasure(base(10, 1, 0.3), {2}, {0.2, 0.6}, grid, 1, 3);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.baseline.levels == 1);
    CHECK(row.gain_ratio[0] == Approx(row.baseline.best_aaoi / row.per_level[0].best_aaoi));
    CHECK(row.gain_ratio[0] >= 1.0 - 1e-12);
    CHECK(row.per_level[0].eps_u == row.x);
  }
}

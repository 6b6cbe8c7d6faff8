#include "adnoma/jobs.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/crc.hpp>
#include "json.hpp"

#include "adnoma/analytic.hpp"
#include "adnoma/validation.hpp"

namespace adnoma {

std::string format_probability(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_age(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

namespace fs = std::filesystem;

class OutputWriter {
public:
  explicit OutputWriter(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& content) {
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / (name + ".tmp");
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
      os.write(content.data(), static_cast<std::streamsize>(content.size()));
      if (!os) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
    boost::crc_32_type crc;
    crc.process_bytes(content.data(), content.size());
    files_.push_back({name, content.size(), crc.checksum()});
  }

  const std::vector<EmittedFile>& files() const { return files_; }

private:
  fs::path dir_;
  std::vector<EmittedFile> files_;
};

// Comma-joined row, newline-terminated.
class Row {
public:
  template <class T>
  Row& operator<<(const T& v) {
    if (!first_) line_ += ',';
    first_ = false;
    if constexpr (std::is_convertible_v<T, std::string>) {
      line_ += v;
    } else {
      line_ += std::to_string(v);
    }
    return *this;
  }
  std::string str() const { return line_ + '\n'; }

private:
  std::string line_;
  bool first_ = true;
};

std::string level_of(const ModelParams& p) {
  return level_label(p.scheme == Scheme::IdealPhase2 ? kInfiniteLevels : p.levels);
}

const char* kGridHeader = "N,K,L,eps_u,p,delta,q,theta,aaoi,converged\n";

std::string grid_row(const ModelParams& base, double p, int delta, const FixedPointResult& fp) {
  return (Row() << base.users << base.relays << level_of(base) << format_probability(base.eps_u)
                << format_probability(p) << delta << format_probability(fp.q_star)
                << format_probability(fp.theta_star) << format_age(fp.aaoi) << (fp.converged ? 1 : 0))
      .str();
}

const char* kOptimumHeader =
    "N,K,L,eps_u,best_p,best_delta,best_q,best_theta,best_aaoi,evaluated,failed,unreachable\n";

std::string optimum_row(int users, const OptimumRecord& r) {
  return (Row() << users << r.relays << level_label(r.levels) << format_probability(r.eps_u)
                << format_probability(r.best_p) << r.best_delta << format_probability(r.best_q)
                << format_probability(r.best_theta) << format_age(r.best_aaoi) << r.evaluated << r.failed
                << r.unreachable)
      .str();
}

std::string ratio(double v) { return format_age(v); }

struct JobContext {
  const ExperimentConfig& cfg;
  const RunOptions& opts;
  OutputWriter& out;
  OutputManifest& manifest;
  std::string legend;

  OptimizeOptions optimize_options() const {
    OptimizeOptions o;
    o.fixed_point = cfg.fixed_point;
    o.warm_start = cfg.warm_start;
    return o;
  }

  void describe(const std::string& file, const std::string& columns) {
    legend += file + "\n" + columns + "\n";
  }

  void fail(const std::string& note) {
    manifest.complete = false;
    manifest.notes.push_back(note);
  }
};

void job_analytic(JobContext& ctx) {
  const ModelParams& mp = ctx.cfg.params;
  mp.validate();
  const FixedPointResult fp = solve_fixed_point(mp, ctx.cfg.fixed_point);
  std::string csv = "N,K,L,eps_u,p,delta,q,theta,aaoi,converged,iterations,residual\n";
  std::string row = grid_row(mp, mp.p, mp.delta, fp);
  row.pop_back();
  csv += row + "," + std::to_string(fp.iterations) + "," + format_probability(fp.residual) + "\n";
  ctx.out.write("analytic.csv", csv);
  ctx.describe("analytic.csv",
               "  q: converged success probability; theta: threshold occupancy; aaoi: network average age "
               "(slots); residual: |q - f(q)| at exit");
  if (!fp.converged) {
    ++ctx.manifest.failed_cells;
    ctx.fail("fixed point did not converge (residual " + format_probability(fp.residual) + ")");
  }
}

void job_optimize(JobContext& ctx) {
  const ModelParams& mp = ctx.cfg.params;
  OptimizeOptions o = ctx.optimize_options();
  const GridSpec grid = ctx.cfg.grid();
  const auto surface = evaluate_grid(mp, grid, o);
  std::string csv = kGridHeader;
  for (const auto& c : surface) csv += grid_row(mp, c.p, c.delta, c.fp);
  ctx.out.write("grid.csv", csv);
  ctx.describe("grid.csv", "  one row per (p, delta) cell; aaoi = inf where p*q = 0; converged: 1/0");

  try {
    const OptimumRecord rec = select_optimum(mp, surface, false);
    ctx.out.write("optimum.csv", std::string(kOptimumHeader) + optimum_row(mp.users, rec));
    ctx.describe("optimum.csv", "  argmin over grid.csv (ties: smaller delta, then smaller p)");
    if (rec.failed > 0) {
      ctx.manifest.failed_cells += rec.failed;
      ctx.fail(std::to_string(rec.failed) + " grid cells did not converge");
    }
  } catch (const OptimizationError& e) {
    ctx.manifest.failed_cells += static_cast<int>(surface.size());
    ctx.fail(e.what());
  }
}

std::string sweep_cells_csv(int users, const RelaySweep& sweep) {
  std::string csv = "N,K,L,eps_u,best_p,best_delta,best_q,best_aaoi,failed,gain_ratio,gain_percent,overall_best\n";
  for (std::size_t r = 0; r < sweep.rows.size(); ++r) {
    const auto& row = sweep.rows[r];
    for (std::size_t li = 0; li < row.per_level.size(); ++li) {
      const auto& rec = row.per_level[li];
      csv += (Row() << users << rec.relays << level_label(rec.levels) << format_probability(rec.eps_u)
                    << format_probability(rec.best_p) << rec.best_delta << format_probability(rec.best_q)
                    << format_age(rec.best_aaoi) << rec.failed << ratio(row.gain_ratio[li])
                    << ratio(100.0 * (row.gain_ratio[li] - 1.0)) << (sweep.best_row[li] == r ? 1 : 0))
                 .str();
    }
  }
  return csv;
}

int count_failed(const RelaySweep& sweep) {
  int failed = 0;
  for (const auto& row : sweep.rows)
    for (const auto& rec : row.per_level) failed += rec.failed;
  return failed;
}

void job_sweep_relays(JobContext& ctx, bool table1) {
  const ExperimentConfig& cfg = ctx.cfg;
  RelaySweep sweep;
  try {
    sweep = sweep_relays(cfg.params, cfg.level_set, cfg.grid(), cfg.k_min, cfg.k_max, ctx.optimize_options());
  } catch (const OptimizationError& e) {
    ctx.fail(e.what());
    ++ctx.manifest.failed_cells;
    return;
  }
  const std::string cells_name = table1 ? "table1_cells.csv" : "sweep_relays.csv";
  ctx.out.write(cells_name, sweep_cells_csv(cfg.params.users, sweep));
  ctx.describe(cells_name,
               "  optimum per (K, L); gain_ratio = AAoI(L=1, same K) / AAoI; gain_percent = 100*(gain_ratio-1); "
               "overall_best marks the optimal K for each L");

  // Overall optimum per L and its gain against the overall L=1 optimum.
  std::string summary = "L,best_K,best_p,best_delta,best_aaoi,gain_percent\n";
  const OptimumRecord* baseline = &sweep.rows.front().baseline;
  for (const auto& row : sweep.rows) {
    if (row.baseline.best_aaoi < baseline->best_aaoi) baseline = &row.baseline;
  }
  for (std::size_t li = 0; li < cfg.level_set.size(); ++li) {
    const auto& rec = overall_optimum(sweep, li);
    summary += (Row() << level_label(rec.levels) << rec.relays << format_probability(rec.best_p) << rec.best_delta
                      << format_age(rec.best_aaoi) << ratio(gain_percent(rec, *baseline)))
                   .str();
  }
  const std::string summary_name = table1 ? "table1_gains.csv" : "sweep_relays_best.csv";
  ctx.out.write(summary_name, summary);
  ctx.describe(summary_name, "  overall optimum over K per L; gain_percent = 100*(AAoI*(L=1)/AAoI*(L) - 1)");

  if (table1) {
    std::string t = "L";
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) t += ",K" + std::to_string(k);
    t += ",best_K,best_delta\n";
    for (std::size_t li = 0; li < cfg.level_set.size(); ++li) {
      Row row;
      row << level_label(cfg.level_set[li]);
      for (const auto& r : sweep.rows) row << r.per_level[li].best_delta;
      const auto& best = overall_optimum(sweep, li);
      row << best.relays << best.best_delta;
      t += row.str();
    }
    ctx.out.write("table1.csv", t);
    ctx.describe("table1.csv", "  optimal delta per (L row, K column); best_K/best_delta mark the boldface cell");
  }

  const int failed = count_failed(sweep);
  if (failed > 0) {
    ctx.manifest.failed_cells += failed;
    ctx.fail(std::to_string(failed) + " grid cells did not converge");
  }
}

void job_sweep_erasure(JobContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  std::vector<SweepRow> rows;
  try {
    rows = sweep_erasure(cfg.params, cfg.level_set, cfg.eps_grid, cfg.grid(), cfg.k_min, cfg.k_max,
                         ctx.optimize_options());
  } catch (const OptimizationError& e) {
    ctx.fail(e.what());
    ++ctx.manifest.failed_cells;
    return;
  }
  std::string csv =
      "eps_u,L,best_K,best_p,best_delta,best_aaoi,baseline_K,baseline_delta,baseline_aaoi,gain_ratio,gain_percent\n";
  std::vector<double> max_gain(cfg.level_set.size(), -std::numeric_limits<double>::infinity());
  std::vector<double> max_at(cfg.level_set.size(), 0.0);
  int failed = 0;
  for (const auto& row : rows) {
    failed += row.baseline.failed;
    for (std::size_t li = 0; li < row.per_level.size(); ++li) {
      const auto& rec = row.per_level[li];
      failed += rec.failed;
      const double gp = 100.0 * (row.gain_ratio[li] - 1.0);
      if (gp > max_gain[li]) {
        max_gain[li] = gp;
        max_at[li] = row.x;
      }
      csv += (Row() << format_probability(row.x) << level_label(rec.levels) << rec.relays
                    << format_probability(rec.best_p) << rec.best_delta << format_age(rec.best_aaoi)
                    << row.baseline.relays << row.baseline.best_delta << format_age(row.baseline.best_aaoi)
                    << ratio(row.gain_ratio[li]) << ratio(gp))
                 .str();
    }
  }
  ctx.out.write("sweep_erasure.csv", csv);
  ctx.describe("sweep_erasure.csv",
               "  per eps_u and L: optimal K (top panel) and gain over the L=1 optimum (bottom panel)");
  std::string mx = "L,eps_u_at_max,max_gain_percent\n";
  for (std::size_t li = 0; li < cfg.level_set.size(); ++li)
    mx += (Row() << level_label(cfg.level_set[li]) << format_probability(max_at[li]) << ratio(max_gain[li])).str();
  ctx.out.write("sweep_erasure_max.csv", mx);
  ctx.describe("sweep_erasure_max.csv", "  largest gain over the eps_u grid per L");
  if (failed > 0) {
    ctx.manifest.failed_cells += failed;
    ctx.fail(std::to_string(failed) + " grid cells did not converge");
  }
}

void job_simulate(JobContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  const SimConfig sc = cfg.sim_config(cfg.params);
  sc.validate();

  std::vector<ReplicationStats> reps;
  if (ctx.opts.trace) {
    for (std::uint64_t seed : sc.seeds) {
      std::ostringstream trace;
      reps.push_back(run_replication(sc, seed, &trace));
      ctx.out.write("trace_seed" + std::to_string(seed) + ".txt", trace.str());
    }
    ctx.describe("trace_seed<seed>.txt", "  slot transmitters forwarders decoded collision(0/1)");
  } else if (sc.seeds.size() >= 2) {
    reps = run_campaign(sc).replications;
  } else {
    reps.push_back(run_replication(sc, sc.seeds.front()));
  }
  const SimStats stats = aggregate(reps);

  const ModelParams& mp = cfg.params;
  std::string per_rep = "seed,N,K,L,eps_u,p,delta,slots,network_aaoi,success_rate\n";
  for (const auto& r : stats.replications) {
    per_rep += (Row() << std::to_string(r.seed) << mp.users << mp.relays << level_of(mp)
                      << format_probability(mp.eps_u) << format_probability(mp.p) << mp.delta
                      << std::to_string(r.slots_simulated) << format_age(r.network_aaoi)
                      << format_probability(r.success_rate))
                   .str();
  }
  ctx.out.write("simulate.csv", per_rep);
  ctx.describe("simulate.csv", "  one row per replication; slots counted after warmup");

  const FixedPointResult fp = solve_fixed_point(mp, cfg.fixed_point);
  std::string summary =
      "N,K,L,eps_u,p,delta,replications,slots,network_aaoi,ci_halfwidth,success_rate,analytic_aaoi,rel_error\n";
  summary += (Row() << mp.users << mp.relays << level_of(mp) << format_probability(mp.eps_u)
                    << format_probability(mp.p) << mp.delta << static_cast<int>(stats.replications.size())
                    << std::to_string(stats.slots_simulated) << format_age(stats.network_aaoi)
                    << format_age(stats.ci_halfwidth) << format_probability(stats.success_rate)
                    << format_age(fp.aaoi) << ratio(std::abs(stats.network_aaoi - fp.aaoi) / fp.aaoi))
                 .str();
  ctx.out.write("simulate_summary.csv", summary);
  ctx.describe("simulate_summary.csv", "  ci_halfwidth: 95% Student-t over replications (0 with one replication)");

  std::string users = "user,aaoi\n";
  for (std::size_t i = 0; i < stats.per_user_aaoi.size(); ++i)
    users += (Row() << static_cast<int>(i) << format_age(stats.per_user_aaoi[i])).str();
  ctx.out.write("per_user.csv", users);
  ctx.describe("per_user.csv", "  per-user time-average age, mean over replications");
  if (!fp.converged) ctx.fail("analytic fixed point did not converge");
}

void job_validate(JobContext& ctx) {
  const ExperimentConfig& cfg = ctx.cfg;
  std::string csv = "N,K,L,eps_u,p,delta,analytic_aaoi,sim_aaoi,ci_halfwidth,rel_error,in_ci\n";
  int failed = 0;
  for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
    for (int l : cfg.level_set) {
      ModelParams at = with_levels(cfg.params, l);
      at.relays = k;
      ValidationRow v;
      try {
        v = validate_cell(at, cfg.grid(), ctx.optimize_options(), [&](const ModelParams& mp) {
          return cfg.sim_config(mp);
        });
      } catch (const OptimizationError& e) {
        ++failed;
        ctx.manifest.notes.push_back(e.what());
        continue;
      }
      failed += v.optimum.failed;
      csv += (Row() << at.users << k << level_label(l) << format_probability(at.eps_u)
                    << format_probability(v.optimum.best_p) << v.optimum.best_delta << format_age(v.analytic_aaoi)
                    << format_age(v.sim.network_aaoi) << format_age(v.sim.ci_halfwidth) << ratio(v.rel_error)
                    << (v.in_ci ? 1 : 0))
                 .str();
    }
  }
  ctx.out.write("validate.csv", csv);
  ctx.describe("validate.csv",
               "  analytic vs simulated AAoI at the grid-optimal (p, delta); rel_error = |sim - analytic| / "
               "analytic; in_ci: analytic inside the 95% CI");
  if (failed > 0) {
    ctx.manifest.failed_cells += failed;
    ctx.fail(std::to_string(failed) + " cells failed to converge");
  }
}

}  // namespace

OutputManifest run_job(const ExperimentConfig& config, const RunOptions& opts) {
  ExperimentConfig cfg = config;
  for (auto& s : cfg.seeds) s += opts.seed_offset;

  OutputManifest manifest;
  manifest.job = std::string(to_string(cfg.job));
  manifest.config_snapshot = to_config_text(config);
  OutputWriter out(opts.out_dir);
  JobContext ctx{cfg, opts, out, manifest, {}};

  switch (cfg.job) {
    case JobKind::Analytic: job_analytic(ctx); break;
    case JobKind::Optimize: job_optimize(ctx); break;
    case JobKind::SweepRelays: job_sweep_relays(ctx, false); break;
    case JobKind::Table1: job_sweep_relays(ctx, true); break;
    case JobKind::SweepErasure: job_sweep_erasure(ctx); break;
    case JobKind::Simulate: job_simulate(ctx); break;
    case JobKind::Validate: job_validate(ctx); break;
  }

  out.write("legend.txt", ctx.legend);
  out.write("resolved.cfg", manifest.config_snapshot);
  manifest.files = out.files();

  nlohmann::ordered_json j;
  j["job"] = manifest.job;
  j["complete"] = manifest.complete;
  j["failed_cells"] = manifest.failed_cells;
  j["seed_offset"] = opts.seed_offset;
  j["notes"] = manifest.notes;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : manifest.files) {
    char crc[16];
    std::snprintf(crc, sizeof crc, "%08x", f.crc32);
    j["files"].push_back({{"name", f.name}, {"bytes", f.bytes}, {"crc32", crc}});
  }
  j["config"] = nlohmann::ordered_json::array();
  for (const auto& e : config.resolved)
    j["config"].push_back({{"key", e.key}, {"value", e.value}, {"default", e.defaulted}});
  out.write("manifest.json", j.dump(2) + "\n");
  return manifest;
}

}  // namespace adnoma

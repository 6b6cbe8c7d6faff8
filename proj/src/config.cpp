#include "adnoma/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

namespace adnoma {

std::string_view to_string(JobKind kind) {
  switch (kind) {
    case JobKind::Analytic: return "analytic";
    case JobKind::Simulate: return "simulate";
    case JobKind::Validate: return "validate";
    case JobKind::Optimize: return "optimize";
    case JobKind::SweepRelays: return "sweep-relays";
    case JobKind::SweepErasure: return "sweep-erasure";
    case JobKind::Table1: return "table1";
  }
  return "?";
}

JobKind job_from_string(std::string_view s) {
  for (JobKind k : {JobKind::Analytic, JobKind::Simulate, JobKind::Validate, JobKind::Optimize,
                    JobKind::SweepRelays, JobKind::SweepErasure, JobKind::Table1}) {
    if (to_string(k) == s) return k;
  }
  throw ParameterError("job", "unknown job kind '" + std::string(s) + "'");
}

SimConfig ExperimentConfig::sim_config(const ModelParams& at) const {
  SimConfig sc;
  sc.params = at;
  sc.horizon = horizon;
  sc.warmup = warmup.value_or(default_warmup(at.delta));
  sc.seeds = seeds;
  sc.gamma_target = gamma_target;
  sc.noise = noise;
  return sc;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T parse_number(const std::string& key, std::string_view text) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ParameterError(key, "cannot parse '" + std::string(text) + "' as a number");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw ParameterError(key, "must be finite");
  }
  return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ParameterError(key, "expected true or false");
}

int parse_levels(const std::string& key, std::string_view text) {
  if (text == "inf") return kInfiniteLevels;
  const int v = parse_number<int>(key, text);
  if (v < 1) throw ParameterError(key, "must be >= 1 or inf");
  return v;
}

std::vector<std::uint64_t> parse_seeds(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  for (auto part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots != std::string_view::npos) {
      const auto lo = parse_number<std::uint64_t>("seeds", trim(part.substr(0, dots)));
      const auto hi = parse_number<std::uint64_t>("seeds", trim(part.substr(dots + 2)));
      if (hi < lo) throw ParameterError("seeds", "empty range");
      if (hi - lo > 1'000'000) throw ParameterError("seeds", "range too large");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else {
      seeds.push_back(parse_number<std::uint64_t>("seeds", part));
    }
  }
  if (seeds.empty()) throw ParameterError("seeds", "at least one seed is required");
  return seeds;
}

std::string seeds_text(const std::vector<std::uint64_t>& seeds) {
  // Contiguous ascending runs collapse to a..b.
  std::string out;
  for (std::size_t i = 0; i < seeds.size();) {
    std::size_t j = i;
    while (j + 1 < seeds.size() && seeds[j + 1] == seeds[j] + 1) ++j;
    if (!out.empty()) out += ',';
    out += std::to_string(seeds[i]);
    if (j > i) out += ".." + std::to_string(seeds[j]);
    i = j + 1;
  }
  return out;
}

const std::vector<std::string>& keys_for(JobKind job) {
  static const std::map<JobKind, std::vector<std::string>> table = {
      {JobKind::Analytic, {"N", "K", "L", "scheme", "eps_u", "eps_r", "p", "delta", "tol", "max_iter"}},
      {JobKind::Simulate,
       {"N", "K", "L", "scheme", "eps_u", "eps_r", "p", "delta", "tol", "max_iter", "horizon", "warmup", "seeds",
        "gamma_target", "noise"}},
      {JobKind::Validate,
       {"N", "eps_u", "L_set", "K_min", "K_max", "p_points", "delta_min", "delta_max", "warm_start", "tol",
        "max_iter", "horizon", "warmup", "seeds"}},
      {JobKind::Optimize,
       {"N", "K", "L", "scheme", "eps_u", "eps_r", "p_points", "delta_min", "delta_max", "warm_start", "tol",
        "max_iter"}},
      {JobKind::SweepRelays,
       {"N", "eps_u", "L_set", "K_min", "K_max", "p_points", "delta_min", "delta_max", "warm_start", "tol",
        "max_iter"}},
      {JobKind::Table1,
       {"N", "eps_u", "L_set", "K_min", "K_max", "p_points", "delta_min", "delta_max", "warm_start", "tol",
        "max_iter"}},
      {JobKind::SweepErasure,
       {"N", "L_set", "K_min", "K_max", "eps_min", "eps_max", "eps_step", "p_points", "delta_min", "delta_max",
        "warm_start", "tol", "max_iter"}},
  };
  return table.at(job);
}

const std::set<std::string>& all_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k{"job"};
    for (JobKind j : {JobKind::Analytic, JobKind::Simulate, JobKind::Validate, JobKind::Optimize,
                      JobKind::SweepRelays, JobKind::SweepErasure, JobKind::Table1})
      for (const auto& key : keys_for(j)) k.insert(key);
    return k;
  }();
  return keys;
}

std::string default_level_set(JobKind job) {
  switch (job) {
    case JobKind::Validate: return "1,2,4,8";
    case JobKind::SweepErasure: return "2,3,4";
    default: return "1,2,3,4,8,16,32,inf";
  }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, std::string> raw;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParameterError("line " + std::to_string(line_no), "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (!all_keys().count(key)) throw ParameterError(key, "unknown key");
    if (value.empty()) throw ParameterError(key, "missing value");
    if (!raw.emplace(key, value).second) throw ParameterError(key, "given more than once");
  }

  const auto job_it = raw.find("job");
  if (job_it == raw.end()) throw ParameterError("job", "required");
  ExperimentConfig cfg;
  cfg.job = job_from_string(job_it->second);
  cfg.resolved.push_back({"job", job_it->second, false});

  const auto& allowed = keys_for(cfg.job);
  for (const auto& [key, value] : raw) {
    if (key != "job" && std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ParameterError(key, "not used by job '" + std::string(to_string(cfg.job)) + "'");
  }

  // Resolve in the job's key order so `resolved` is stable.
  auto take = [&](const std::string& key, const std::string& fallback) {
    const auto it = raw.find(key);
    const bool defaulted = it == raw.end();
    return std::pair<std::string, bool>(defaulted ? fallback : it->second, defaulted);
  };
  auto record = [&](const std::string& key, std::string value, bool defaulted) {
    cfg.resolved.push_back({key, std::move(value), defaulted});
  };

  ModelParams& mp = cfg.params;
  std::optional<std::string> scheme_text;
  std::optional<int> level_value;
  for (const auto& key : allowed) {
    if (key == "N") {
      auto [v, d] = take(key, "30");
      mp.users = parse_number<int>(key, v);
      if (mp.users < 1) throw ParameterError(key, "must be >= 1");
      record(key, v, d);
    } else if (key == "K") {
      auto [v, d] = take(key, "1");
      mp.relays = parse_number<int>(key, v);
      if (mp.relays < 1) throw ParameterError(key, "must be >= 1");
      record(key, v, d);
    } else if (key == "L") {
      auto [v, d] = take(key, "1");
      level_value = parse_levels(key, v);
      record(key, v, d);
    } else if (key == "scheme") {
      const bool given = raw.count(key) != 0;
      std::string v = given ? raw.at(key)
                            : (level_value == kInfiniteLevels ? std::string("ideal_phase2") : std::string("noma_mr"));
      mp.scheme = scheme_from_string(v);
      scheme_text = v;
      record(key, v, !given);
    } else if (key == "eps_u" || key == "eps_r") {
      auto [v, d] = take(key, key == "eps_u" ? "0.3" : "0");
      const double e = parse_number<double>(key, v);
      if (!(e >= 0.0 && e <= 1.0)) throw ParameterError(key, "must lie in [0, 1]");
      (key == "eps_u" ? mp.eps_u : mp.eps_r) = e;
      record(key, v, d);
    } else if (key == "p") {
      auto [v, d] = take(key, fmt_double(std::min(1.0, 2.0 / mp.users)));
      mp.p = parse_number<double>(key, v);
      if (!(mp.p > 0.0 && mp.p <= 1.0)) throw ParameterError(key, "must lie in (0, 1]");
      record(key, v, d);
    } else if (key == "delta") {
      auto [v, d] = take(key, "1");
      mp.delta = parse_number<int>(key, v);
      if (mp.delta < 1) throw ParameterError(key, "must be >= 1");
      record(key, v, d);
    } else if (key == "tol") {
      auto [v, d] = take(key, "1e-10");
      cfg.fixed_point.tol = parse_number<double>(key, v);
      if (!(cfg.fixed_point.tol > 0.0)) throw ParameterError(key, "must be > 0");
      record(key, v, d);
    } else if (key == "max_iter") {
      auto [v, d] = take(key, "100000");
      cfg.fixed_point.max_iter = parse_number<int>(key, v);
      if (cfg.fixed_point.max_iter < 1) throw ParameterError(key, "must be >= 1");
      record(key, v, d);
    } else if (key == "horizon") {
      auto [v, d] = take(key, "2000000");
      cfg.horizon = parse_number<std::int64_t>(key, v);
      if (cfg.horizon < 1) throw ParameterError(key, "must be >= 1");
      record(key, v, d);
    } else if (key == "warmup") {
      auto [v, d] = take(key, "auto");
      if (v != "auto") {
        cfg.warmup = parse_number<std::int64_t>(key, v);
        if (*cfg.warmup < 0) throw ParameterError(key, "must be >= 0");
        if (*cfg.warmup >= cfg.horizon) throw ParameterError(key, "must be smaller than horizon");
      }
      record(key, v, d);
    } else if (key == "seeds") {
      auto [v, d] = take(key, "1..20");
      cfg.seeds = parse_seeds(v);
      record(key, seeds_text(cfg.seeds), d);
    } else if (key == "gamma_target" || key == "noise") {
      if (raw.count(key)) {
        const double g = parse_number<double>(key, raw.at(key));
        if (!(g > 0.0)) throw ParameterError(key, "must be > 0");
        (key == "noise" ? cfg.noise : cfg.gamma_target) = g;
        record(key, raw.at(key), false);
      }
    } else if (key == "p_points") {
      auto [v, d] = take(key, "201");
      cfg.p_points = parse_number<int>(key, v);
      if (cfg.p_points < 1) throw ParameterError(key, "must be >= 1");
      record(key, v, d);
    } else if (key == "delta_min" || key == "delta_max") {
      auto [v, d] = take(key, key == "delta_min" ? "1" : "100");
      const int x = parse_number<int>(key, v);
      if (x < 1) throw ParameterError(key, "must be >= 1");
      (key == "delta_min" ? cfg.delta_min : cfg.delta_max) = x;
      if (key == "delta_max" && cfg.delta_max < cfg.delta_min) throw ParameterError(key, "must be >= delta_min");
      record(key, v, d);
    } else if (key == "K_min" || key == "K_max") {
      auto [v, d] = take(key, key == "K_min" ? "1" : "8");
      const int x = parse_number<int>(key, v);
      if (x < 1) throw ParameterError(key, "must be >= 1");
      (key == "K_min" ? cfg.k_min : cfg.k_max) = x;
      if (key == "K_max" && cfg.k_max < cfg.k_min) throw ParameterError(key, "must be >= K_min");
      record(key, v, d);
    } else if (key == "L_set") {
      auto [v, d] = take(key, default_level_set(cfg.job));
      for (auto part : split(v, ',')) cfg.level_set.push_back(parse_levels(key, part));
      std::vector<int> uniq = cfg.level_set;
      std::sort(uniq.begin(), uniq.end());
      if (std::adjacent_find(uniq.begin(), uniq.end()) != uniq.end())
        throw ParameterError(key, "duplicate level count");
      record(key, v, d);
    } else if (key == "warm_start") {
      auto [v, d] = take(key, "true");
      cfg.warm_start = parse_bool(key, v);
      record(key, v, d);
    } else if (key == "eps_min" || key == "eps_max" || key == "eps_step") {
      // handled together below
    }
  }

  if (cfg.job == JobKind::SweepErasure) {
    auto [lo_t, lo_d] = take("eps_min", "0.05");
    auto [hi_t, hi_d] = take("eps_max", "0.95");
    auto [st_t, st_d] = take("eps_step", "0.05");
    const double lo = parse_number<double>("eps_min", lo_t);
    const double hi = parse_number<double>("eps_max", hi_t);
    const double step = parse_number<double>("eps_step", st_t);
    if (!(lo > 0.0 && lo < 1.0)) throw ParameterError("eps_min", "must lie in (0, 1)");
    if (!(hi >= lo && hi < 1.0)) throw ParameterError("eps_max", "must lie in [eps_min, 1)");
    if (!(step > 0.0)) throw ParameterError("eps_step", "must be > 0");
    const auto count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) cfg.eps_grid.push_back(std::round((lo + i * step) * 1e12) / 1e12);
    record("eps_min", lo_t, lo_d);
    record("eps_max", hi_t, hi_d);
    record("eps_step", st_t, st_d);
  }

  if (level_value) {
    if (*level_value == kInfiniteLevels) {
      if (mp.scheme != Scheme::IdealPhase2) throw ParameterError("L", "inf requires scheme = ideal_phase2");
      mp.levels = 1;
    } else {
      mp.levels = *level_value;
    }
  }
  if (scheme_text && mp.scheme == Scheme::NomaMr && mp.eps_r != 0.0)
    throw ParameterError("eps_r", "must be 0 for the noma_mr scheme");
  if (cfg.gamma_target.has_value() != cfg.noise.has_value())
    throw ParameterError("gamma_target", "gamma_target and noise must be given together");
  return cfg;
}

std::string to_config_text(const ExperimentConfig& config) {
  std::string out;
  for (const auto& e : config.resolved) {
    out += e.key + " = " + e.value;
    if (e.defaulted) out += "  # default";
    out += '\n';
  }
  return out;
}

}  // namespace adnoma

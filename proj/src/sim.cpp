#include "adnoma/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <boost/math/distributions/students_t.hpp>

namespace adnoma {

void SimConfig::validate() const {
  params.validate();
  if (warmup < 0) throw ParameterError("warmup", "must be >= 0");
  if (horizon <= warmup) throw ParameterError("horizon", "must exceed warmup");
  if (seeds.empty()) throw ParameterError("seeds", "at least one seed is required");
  if (gamma_target.has_value() != noise.has_value())
    throw ParameterError("gamma_target", "gamma_target and noise must be given together");
}

std::int64_t default_warmup(int delta) { return std::max<std::int64_t>(10'000, 20LL * delta); }

void SlotTrace::clear() {
  transmitters.clear();
  relay_captures.clear();
  forwarders.clear();
  level_choices.clear();
  decoded.clear();
  power_collision = false;
  sinr.clear();
}

void write_trace_line(std::ostream& os, const SlotTrace& trace) {
  os << trace.slot << ' ' << trace.transmitters.size() << ' ' << trace.forwarders.size() << ' '
     << trace.decoded.size() << ' ' << (trace.power_collision ? 1 : 0) << '\n';
}

Simulator::Simulator(const ModelParams& params, std::uint64_t seed)
    : params_(params),
      rng_(seed),
      ages_(static_cast<std::size_t>(params.users), 1),
      age_sums_(static_cast<std::size_t>(params.users), 0) {
  params_.validate();
  tx_.reserve(ages_.size());
  fwd_relay_.reserve(static_cast<std::size_t>(params.relays));
  fwd_user_.reserve(static_cast<std::size_t>(params.relays));
  if (params_.scheme == Scheme::NomaMr)
    level_used_.assign(static_cast<std::size_t>(params_.levels) + 1, 0);
}

void Simulator::step(bool accumulate, SlotTrace* trace) {
  const int users = params_.users;
  const double p = params_.p;
  const std::int64_t delta = params_.delta;

  // Phase 1: age-gated access.
  tx_.clear();
  for (int i = 0; i < users; ++i) {
    const std::int64_t age = ages_[static_cast<std::size_t>(i)];
    if (accumulate) age_sums_[static_cast<std::size_t>(i)] += static_cast<std::uint64_t>(age);
    if (age >= delta && uniform01(rng_) < p) tx_.push_back(i);
  }

  // Relay capture: exactly one surviving packet.
  fwd_relay_.clear();
  fwd_user_.clear();
  if (trace) {
    trace->clear();
    trace->slot = slot_;
    trace->transmitters = tx_;
    trace->relay_captures.assign(static_cast<std::size_t>(params_.relays), -1);
  }
  if (!tx_.empty()) {
    for (int r = 0; r < params_.relays; ++r) {
      int survivors = 0;
      int last = -1;
      for (int u : tx_) {
        if (uniform01(rng_) >= params_.eps_u) {
          ++survivors;
          last = u;
        }
      }
      if (survivors == 1) {
        fwd_relay_.push_back(r);
        fwd_user_.push_back(last);
        if (trace) trace->relay_captures[static_cast<std::size_t>(r)] = last;
      }
    }
  }

  // Phase 2.
  decoded_.clear();
  levels_.clear();
  bool collision = false;
  if (!fwd_relay_.empty()) {
    switch (params_.scheme) {
      case Scheme::NomaMr: {
        for (std::size_t f = 0; f < fwd_relay_.size(); ++f) {
          const int level = 1 + static_cast<int>(uniform01(rng_) * params_.levels);
          levels_.push_back(level);
          auto& used = level_used_[static_cast<std::size_t>(level)];
          if (used) collision = true;
          used = 1;
        }
        for (int level : levels_) level_used_[static_cast<std::size_t>(level)] = 0;
        if (!collision) decoded_ = fwd_user_;
        break;
      }
      case Scheme::OmaMru:
      case Scheme::IdealPhase2: {
        int delivered = 0;
        for (std::size_t f = 0; f < fwd_user_.size(); ++f) {
          if (uniform01(rng_) >= params_.eps_r) {
            ++delivered;
            decoded_.push_back(fwd_user_[f]);
          }
        }
        if (params_.scheme == Scheme::OmaMru && delivered > 1) {
          collision = true;
          decoded_.clear();
        }
        break;
      }
    }
  }
  std::sort(decoded_.begin(), decoded_.end());
  decoded_.erase(std::unique(decoded_.begin(), decoded_.end()), decoded_.end());

  if (accumulate) {
    attempts_ += tx_.size();
    deliveries_ += decoded_.size();
  }
  if (trace) {
    trace->forwarders = fwd_relay_;
    if (params_.scheme == Scheme::NomaMr) trace->level_choices = levels_;
    trace->decoded = decoded_;
    trace->power_collision = collision;
    if (power_levels_ && params_.scheme == Scheme::NomaMr && !collision && !levels_.empty())
      trace->sinr = sic_sinr_trace(*power_levels_, levels_);
  }

  for (auto& age : ages_) ++age;
  for (int u : decoded_) ages_[static_cast<std::size_t>(u)] = 1;
  ++slot_;
}

ReplicationStats run_replication(const SimConfig& config, std::uint64_t seed, std::ostream* trace) {
  config.validate();
  Simulator sim(config.params, seed);
  const bool want_sinr = trace && config.gamma_target && config.params.scheme == Scheme::NomaMr;
  if (want_sinr)
    sim.set_power_levels(receive_power_levels(*config.gamma_target, *config.noise, config.params.levels));

  SlotTrace slot_trace;
  for (std::int64_t t = 0; t < config.horizon; ++t) {
    const bool counted = t >= config.warmup;
    if (trace) {
      sim.step(counted, &slot_trace);
      write_trace_line(*trace, slot_trace);
    } else {
      sim.step(counted);
    }
  }

  ReplicationStats rep;
  rep.seed = seed;
  rep.slots_simulated = config.horizon - config.warmup;
  rep.attempts = sim.attempts();
  rep.deliveries = sim.deliveries();
  rep.success_rate = rep.attempts ? static_cast<double>(rep.deliveries) / static_cast<double>(rep.attempts) : 0.0;
  rep.per_user_aaoi.reserve(sim.age_sums().size());
  double total = 0.0;
  for (std::uint64_t s : sim.age_sums()) {
    const double avg = static_cast<double>(s) / static_cast<double>(rep.slots_simulated);
    rep.per_user_aaoi.push_back(avg);
    total += avg;
  }
  rep.network_aaoi = total / static_cast<double>(rep.per_user_aaoi.size());
  return rep;
}

SimStats aggregate(std::vector<ReplicationStats> reps) {
  SimStats out;
  if (reps.empty()) return out;
  const std::size_t users = reps.front().per_user_aaoi.size();
  const double count = static_cast<double>(reps.size());
  out.per_user_aaoi.assign(users, 0.0);
  std::uint64_t attempts = 0;
  std::uint64_t deliveries = 0;
  for (const auto& r : reps) {
    for (std::size_t i = 0; i < users; ++i) out.per_user_aaoi[i] += r.per_user_aaoi[i];
    attempts += r.attempts;
    deliveries += r.deliveries;
    out.slots_simulated += r.slots_simulated;
  }
  double total = 0.0;
  for (auto& v : out.per_user_aaoi) {
    v /= count;
    total += v;
  }
  out.network_aaoi = total / static_cast<double>(users);
  out.success_rate = attempts ? static_cast<double>(deliveries) / static_cast<double>(attempts) : 0.0;

  if (reps.size() >= 2) {
    double mean = 0.0;
    for (const auto& r : reps) mean += r.network_aaoi;
    mean /= count;
    double ss = 0.0;
    for (const auto& r : reps) ss += (r.network_aaoi - mean) * (r.network_aaoi - mean);
    const double sd = std::sqrt(ss / (count - 1.0));
    const boost::math::students_t dist(count - 1.0);
    out.ci_halfwidth = boost::math::quantile(dist, 0.975) * sd / std::sqrt(count);
  }
  out.replications = std::move(reps);
  return out;
}

SimStats run_campaign(const SimConfig& config) {
  config.validate();
  if (config.seeds.size() < 2) throw ParameterError("seeds", "a campaign needs at least two seeds");
  const auto n = static_cast<std::int64_t>(config.seeds.size());
  std::vector<ReplicationStats> reps(config.seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i)
    reps[static_cast<std::size_t>(i)] = run_replication(config, config.seeds[static_cast<std::size_t>(i)]);
  return aggregate(std::move(reps));
}

SimStats run_campaign_serial(const SimConfig& config) {
  config.validate();
  if (config.seeds.size() < 2) throw ParameterError("seeds", "a campaign needs at least two seeds");
  std::vector<ReplicationStats> reps;
  reps.reserve(config.seeds.size());
  for (std::uint64_t seed : config.seeds) reps.push_back(run_replication(config, seed));
  return aggregate(std::move(reps));
}

}  // namespace adnoma

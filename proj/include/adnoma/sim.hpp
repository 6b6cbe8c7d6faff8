#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "adnoma/model.hpp"
#include "adnoma/power_levels.hpp"

namespace adnoma {

/// Pinned generator. std::mt19937_64 output is fixed by the standard; the
/// distributions below are ours so that draws are reproducible everywhere.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct SimConfig {
  ModelParams params;
  std::int64_t horizon = 2'000'000;  // total slots, warmup included
  std::int64_t warmup = 10'000;
  std::vector<std::uint64_t> seeds{1};
  std::optional<double> gamma_target;  // enables SINR in SlotTrace
  std::optional<double> noise;

  void validate() const;
};

/// max(10^4, 20·δ)
std::int64_t default_warmup(int delta);

/// One slot's causal record. Relay and user ids are 0-based.
struct SlotTrace {
  std::int64_t slot = 0;
  std::vector<int> transmitters;    // ascending user ids
  std::vector<int> relay_captures;  // size K, -1 = nothing captured
  std::vector<int> forwarders;      // relay ids that forwarded, ascending
  std::vector<int> level_choices;   // 1-based level per forwarder (NomaMr only)
  std::vector<int> decoded;         // ascending unique user ids
  bool power_collision = false;
  std::vector<double> sinr;         // SIC stage SINRs when levels are configured

  void clear();
};

/// Writes "<slot> <transmitters> <forwarders> <decoded> <collision>".
void write_trace_line(std::ostream& os, const SlotTrace& trace);

/// Slot-synchronous protocol state for one replication. Per slot the draws
/// are consumed in this order: one access draw per eligible user
/// (ascending); then for each relay (ascending) one erasure draw per
/// transmitter (ascending); then one phase-2 draw per forwarder (ascending
/// relay id): a level draw floor(u·L)+1 for NomaMr, an erasure draw
/// otherwise.
class Simulator {
public:
  Simulator(const ModelParams& params, std::uint64_t seed);

  /// Advances one slot. When `accumulate` is set, the ages at the start of
  /// the slot are added to the running sums before they change.
  void step(bool accumulate, SlotTrace* trace = nullptr);

  const std::vector<std::int64_t>& ages() const { return ages_; }
  const std::vector<std::uint64_t>& age_sums() const { return age_sums_; }
  std::uint64_t attempts() const { return attempts_; }
  std::uint64_t deliveries() const { return deliveries_; }
  std::int64_t slot() const { return slot_; }

  void set_power_levels(PowerLevelSet levels) { power_levels_ = std::move(levels); }

private:
  ModelParams params_;
  Rng rng_;
  std::int64_t slot_ = 0;
  std::vector<std::int64_t> ages_;
  std::vector<std::uint64_t> age_sums_;
  std::uint64_t attempts_ = 0;
  std::uint64_t deliveries_ = 0;
  std::optional<PowerLevelSet> power_levels_;

  // scratch, reused across slots
  std::vector<int> tx_;
  std::vector<int> fwd_relay_;
  std::vector<int> fwd_user_;
  std::vector<int> levels_;
  std::vector<char> level_used_;
  std::vector<int> decoded_;
};

struct ReplicationStats {
  std::uint64_t seed = 0;
  std::vector<double> per_user_aaoi;
  double network_aaoi = 0.0;
  double success_rate = 0.0;  // delivered packets per transmission attempt
  std::uint64_t attempts = 0;
  std::uint64_t deliveries = 0;
  std::int64_t slots_simulated = 0;  // slots after warmup
};

struct SimStats {
  std::vector<double> per_user_aaoi;
  double network_aaoi = 0.0;
  double ci_halfwidth = 0.0;  // 95% Student-t over replications
  double success_rate = 0.0;
  std::int64_t slots_simulated = 0;  // summed over replications
  std::vector<ReplicationStats> replications;  // in seed order
};

/// Deterministic given (config, seed). Optional per-slot trace lines go to
/// `trace` (warmup slots included).
ReplicationStats run_replication(const SimConfig& config, std::uint64_t seed,
                                 std::ostream* trace = nullptr);

/// Replications run in parallel (OpenMP); results are assembled by seed
/// index so the output does not depend on the thread count. Needs >= 2 seeds.
SimStats run_campaign(const SimConfig& config);

/// Single-threaded reference for run_campaign.
SimStats run_campaign_serial(const SimConfig& config);

/// Order-fixed aggregation of per-seed results.
SimStats aggregate(std::vector<ReplicationStats> reps);

}  // namespace adnoma

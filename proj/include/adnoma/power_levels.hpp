#pragma once

#include <span>
#include <vector>

namespace adnoma {

/// Preset receive powers at the sink, strongest first. Level l (1-based)
/// is Γσ²(Γ+1)^(L-l), so each SIC stage sees SINR >= Γ when the weaker
/// levels are still interfering.
struct PowerLevelSet {
  std::vector<double> gamma;  // linear watts, descending
  double target_sinr = 1.0;   // Γ
  double noise_power = 1.0;   // σ²

  int levels() const { return static_cast<int>(gamma.size()); }
};

PowerLevelSet receive_power_levels(double target_sinr, double noise_power, int levels);

/// Per-stage SINR when decoding the occupied levels strongest first, each
/// stage interfered by all weaker occupied levels. `occupied` holds 1-based
/// level indices in any order; duplicates throw (that is a power collision).
std::vector<double> sic_sinr_trace(const PowerLevelSet& set, std::span<const int> occupied);

}  // namespace adnoma

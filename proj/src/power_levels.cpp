#include "adnoma/power_levels.hpp"

#include <algorithm>
#include <cmath>

#include "adnoma/model.hpp"

namespace adnoma {

PowerLevelSet receive_power_levels(double target_sinr, double noise_power, int levels) {
  if (!(target_sinr > 0.0)) throw ParameterError("gamma_target", "must be > 0");
  if (!(noise_power > 0.0)) throw ParameterError("noise", "must be > 0");
  if (levels < 1) throw ParameterError("L", "must be >= 1");
  PowerLevelSet set;
  set.target_sinr = target_sinr;
  set.noise_power = noise_power;
  set.gamma.reserve(static_cast<std::size_t>(levels));
  for (int l = 1; l <= levels; ++l)
    set.gamma.push_back(target_sinr * noise_power * std::pow(target_sinr + 1.0, levels - l));
  return set;
}

std::vector<double> sic_sinr_trace(const PowerLevelSet& set, std::span<const int> occupied) {
  std::vector<int> order(occupied.begin(), occupied.end());
  std::sort(order.begin(), order.end());
  if (std::adjacent_find(order.begin(), order.end()) != order.end())
    throw ParameterError("occupied", "duplicate level index (power collision)");
  for (int l : order) {
    if (l < 1 || l > set.levels()) throw ParameterError("occupied", "level index out of range");
  }

  // Ascending index = descending power, so the residual interference at
  // stage i is the sum over order[i+1..].
  std::vector<double> sinr(order.size());
  double interference = 0.0;
  for (std::size_t i = order.size(); i-- > 0;) {
    const double power = set.gamma[static_cast<std::size_t>(order[i] - 1)];
    sinr[i] = power / (set.noise_power + interference);
    interference += power;
  }
  return sinr;
}

}  // namespace adnoma

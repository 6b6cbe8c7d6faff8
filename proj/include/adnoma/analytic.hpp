#pragma once

#include <cstdint>
#include <vector>

#include "adnoma/model.hpp"

namespace adnoma {

/// Binomial coefficient C(n, k) as a double. Exact for n <= 64, log-gamma
/// above. Returns 0 for k < 0 or k > n.
double binomial(int n, int k);

/// q̂: probability that a given relay captures the tagged packet while `n`
/// other packets are on the air, and the forwarded copy survives phase 2.
double capture_prob(int n, double eps_u, double eps_r);

/// P_U(n): probability that exactly `n` of the other N-1 users transmit,
/// each one independently with probability theta·p.
double transmitters_pmf(int n, int users, double theta, double p);

/// P_L(m): probability that m relays drawing uniformly from L levels all
/// pick distinct levels. Zero when m > L.
double unique_levels_prob(int m, int levels);

/// P_k(n): probability that some k+1 of the K relays each capture one
/// particular packet assignment while the remaining K-k-1 capture nothing.
/// Throws ParameterError if (n+1)·q̂ > 1.
double forwarders_prob(int n, int k, int relays, double qhat);

/// N_k(n) = (n+1)^(k+1) - n^(k+1). Throws OverflowError instead of wrapping.
std::uint64_t tagged_combinations(int n, int k);

/// Q(n): conditional delivery probability of the tagged packet given `n`
/// other transmitters, under params.scheme.
double cond_success(int n, const ModelParams& params);

/// q = sum_n P_U(n)·Q(n) at threshold occupancy `theta`.
double success_prob(const ModelParams& params, double theta);

/// θ = 1 / (δpq + 1 - pq): probability a user is at or above the threshold.
double occupancy_theta(int delta, double p, double q);

/// Average age δ/2 + 1/(pq) - δ/(2(δpq + 1 - pq)).
/// Throws UnreachableSinkError when p·q == 0.
double aaoi_formula(int delta, double p, double q);

/// Caches Q(n) and the binomial weights for one (N, K, L, ε, scheme) so
/// that q(θ, p) costs N multiply-adds. p and delta in the params are unused.
class SuccessModel {
public:
  explicit SuccessModel(const ModelParams& params);

  double operator()(double theta, double p) const;

  int users() const { return static_cast<int>(cond_.size()); }
  double cond_success(int n) const { return cond_.at(static_cast<std::size_t>(n)); }

private:
  std::vector<double> cond_;
  std::vector<double> binom_;
};

}  // namespace adnoma

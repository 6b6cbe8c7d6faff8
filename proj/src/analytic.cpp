#include "adnoma/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace adnoma {

namespace {

constexpr int kExactBinomialLimit = 64;
// Above this the direct binomial weights overflow a double; fall back to
// log-space pmf evaluation.
constexpr int kDirectWeightsLimit = 1000;

std::optional<std::uint64_t> checked_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(r, base, &r)) return std::nullopt;
  }
  return r;
}

double tagged_combinations_real(int n, int k) {
  const auto hi = checked_pow(static_cast<std::uint64_t>(n) + 1, k + 1);
  if (hi) return static_cast<double>(*hi - *checked_pow(static_cast<std::uint64_t>(n), k + 1));
  return std::pow(n + 1.0, k + 1) - std::pow(static_cast<double>(n), k + 1);
}

double capture_for(int n, const ModelParams& params) {
  return capture_prob(n, params.eps_u, params.eps_r);
}

// sum_{n=0}^{m} w[n] x^n (1-x)^(m-n), evaluated by Horner in the smaller
// of x/(1-x) and (1-x)/x.
double bernstein_sum(const std::vector<double>& w, double x) {
  const int m = static_cast<int>(w.size()) - 1;
  const double y = 1.0 - x;
  if (m == 0) return w[0];
  if (x <= 0.5) {
    const double r = x / y;
    double acc = 0.0;
    for (int n = m; n >= 0; --n) acc = acc * r + w[static_cast<std::size_t>(n)];
    return acc * std::pow(y, m);
  }
  if (y == 0.0) return w[static_cast<std::size_t>(m)];
  const double r = y / x;
  double acc = 0.0;
  for (int n = 0; n <= m; ++n) acc = acc * r + w[static_cast<std::size_t>(n)];
  return acc * std::pow(x, m);
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  if (n <= kExactBinomialLimit) {
    unsigned __int128 r = 1;
    for (int i = 0; i < k; ++i) r = r * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
    return static_cast<double>(static_cast<std::uint64_t>(r));
  }
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

double capture_prob(int n, double eps_u, double eps_r) {
  if (n < 0) throw ParameterError("n", "must be >= 0");
  return (1.0 - eps_u) * std::pow(eps_u, n) * (1.0 - eps_r);
}

double transmitters_pmf(int n, int users, double theta, double p) {
  if (users < 1) throw ParameterError("N", "must be >= 1");
  if (n < 0 || n > users - 1) throw ParameterError("n", "must lie in [0, N-1]");
  const double x = theta * p;
  if (!(x >= 0.0 && x <= 1.0)) throw ParameterError("theta", "theta·p must lie in [0, 1]");
  const int m = users - 1;
  if (m <= kExactBinomialLimit) return binomial(m, n) * std::pow(x, n) * std::pow(1.0 - x, m - n);
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x == 1.0) return n == m ? 1.0 : 0.0;
  const double log_c = std::lgamma(m + 1.0) - std::lgamma(n + 1.0) - std::lgamma(m - n + 1.0);
  return std::exp(log_c + n * std::log(x) + (m - n) * std::log1p(-x));
}

double unique_levels_prob(int m, int levels) {
  if (m < 0) throw ParameterError("m", "must be >= 0");
  if (levels < 1) throw ParameterError("L", "must be >= 1");
  if (m > levels) return 0.0;
  double r = 1.0;
  for (int i = 0; i < m; ++i) r *= static_cast<double>(levels - i) / levels;
  return r;
}

double forwarders_prob(int n, int k, int relays, double qhat) {
  if (relays < 1) throw ParameterError("K", "must be >= 1");
  if (k < 0 || k > relays - 1) throw ParameterError("k", "must lie in [0, K-1]");
  if (n < 0) throw ParameterError("n", "must be >= 0");
  const double idle = 1.0 - (n + 1) * qhat;
  if (idle < -1e-12) throw ParameterError("qhat", "(n+1)·qhat exceeds 1");
  return binomial(relays, k + 1) * std::pow(qhat, k + 1) * std::pow(std::max(idle, 0.0), relays - k - 1);
}

std::uint64_t tagged_combinations(int n, int k) {
  if (n < 0) throw ParameterError("n", "must be >= 0");
  if (k < 0) throw ParameterError("k", "must be >= 0");
  const auto hi = checked_pow(static_cast<std::uint64_t>(n) + 1, k + 1);
  if (!hi) throw OverflowError("(n+1)^(k+1) exceeds 64-bit range");
  return *hi - *checked_pow(static_cast<std::uint64_t>(n), k + 1);
}

double cond_success(int n, const ModelParams& params) {
  if (n < 0 || n > params.users - 1) throw ParameterError("n", "must lie in [0, N-1]");
  const int relays = params.relays;
  const double qhat = capture_for(n, params);
  switch (params.scheme) {
    case Scheme::OmaMru:
      return relays * qhat * std::pow(1.0 - (n + 1) * qhat, relays - 1);
    case Scheme::IdealPhase2:
      return 1.0 - std::pow(1.0 - qhat, relays);
    case Scheme::NomaMr: {
      double q = 0.0;
      const int last = std::min(params.levels, relays) - 1;
      for (int k = 0; k <= last; ++k) {
        q += tagged_combinations_real(n, k) * forwarders_prob(n, k, relays, qhat) *
             unique_levels_prob(k + 1, params.levels);
      }
      return std::clamp(q, 0.0, 1.0);
    }
  }
  return 0.0;
}

double success_prob(const ModelParams& params, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ParameterError("theta", "must lie in (0, 1]");
  return SuccessModel(params)(theta, params.p);
}

double occupancy_theta(int delta, double p, double q) {
  if (delta < 1) throw ParameterError("delta", "must be >= 1");
  // 1 + (δ-1)pq is the same denominator without the cancellation at δ = 1.
  return 1.0 / (1.0 + (delta - 1) * (p * q));
}

double aaoi_formula(int delta, double p, double q) {
  if (delta < 1) throw ParameterError("delta", "must be >= 1");
  const double pq = p * q;
  if (!(pq > 0.0)) throw UnreachableSinkError("p·q = 0: the sink never receives an update");
  return delta / 2.0 + 1.0 / pq - delta / (2.0 * (1.0 + (delta - 1) * pq));
}

SuccessModel::SuccessModel(const ModelParams& params) {
  if (params.users < 1) throw ParameterError("N", "must be >= 1");
  if (params.relays < 1) throw ParameterError("K", "must be >= 1");
  if (params.levels < 1) throw ParameterError("L", "must be >= 1");
  const int m = params.users - 1;
  cond_.resize(static_cast<std::size_t>(params.users));
  for (int n = 0; n <= m; ++n) cond_[static_cast<std::size_t>(n)] = adnoma::cond_success(n, params);
  if (m <= kDirectWeightsLimit) {
    binom_.resize(cond_.size());
    for (int n = 0; n <= m; ++n)
      binom_[static_cast<std::size_t>(n)] = binomial(m, n) * cond_[static_cast<std::size_t>(n)];
  }
}

double SuccessModel::operator()(double theta, double p) const {
  const double x = theta * p;
  if (!binom_.empty()) return std::clamp(bernstein_sum(binom_, x), 0.0, 1.0);
  double q = 0.0;
  const int users = static_cast<int>(cond_.size());
  for (int n = 0; n < users; ++n) q += transmitters_pmf(n, users, theta, p) * cond_[static_cast<std::size_t>(n)];
  return std::clamp(q, 0.0, 1.0);
}

}  // namespace adnoma

#include "doctest.h"

#include <cmath>
#include <random>

#include "adnoma/analytic.hpp"
#include "oracles.hpp"

using namespace adnoma;
using doctest::Approx;

namespace {

ModelParams noma(int users, int relays, int levels, double eps_u) {
  ModelParams p;
  p.users = users;
  p.relays = relays;
  p.levels = levels;
  p.eps_u = eps_u;
  p.scheme = Scheme::NomaMr;
  return p;
}

}  // namespace

TEST_CASE("capture probability") {
  CHECK(capture_prob(0, 0.3, 0.0) == Approx(0.7).epsilon(1e-15));
  CHECK(capture_prob(1, 0.5, 0.0) == Approx(0.25).epsilon(1e-15));
  CHECK(capture_prob(2, 0.3, 0.1) == Approx(0.0567).epsilon(1e-14));
  CHECK_THROWS_AS(capture_prob(-1, 0.3, 0.0), ParameterError);
}

TEST_CASE("transmitter count pmf") {
  CHECK(transmitters_pmf(0, 1, 0.4, 0.9) == 1.0);
  CHECK(transmitters_pmf(2, 3, 1.0, 1.0) == 1.0);
  CHECK(transmitters_pmf(1, 3, 0.5, 0.2) == Approx(0.18).epsilon(1e-14));
  CHECK_THROWS_AS(transmitters_pmf(3, 3, 0.5, 0.2), ParameterError);
  CHECK_THROWS_AS(transmitters_pmf(-1, 3, 0.5, 0.2), ParameterError);
}

TEST_CASE("transmitter pmf sums to one") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> users(1, 64);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const int n_users = users(rng);
    const double theta = unit(rng);
    const double p = unit(rng);
    double sum = 0.0;
    for (int n = 0; n < n_users; ++n) sum += transmitters_pmf(n, n_users, theta, p);
    REQUIRE(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("log-space pmf above the exact binomial range") {
  // Compare the log-gamma route with a direct product for N = 80.
  const int users = 80;
  const double x = 0.03;
  double sum = 0.0;
  for (int n = 0; n < users; ++n) {
    double c = 1.0;
    for (int i = 0; i < n; ++i) c = c * (users - 1 - i) / (i + 1);
    const double direct = c * std::pow(x, n) * std::pow(1 - x, users - 1 - n);
    CHECK(transmitters_pmf(n, users, x, 1.0) == Approx(direct).epsilon(1e-10));
    sum += transmitters_pmf(n, users, x, 1.0);
  }
  CHECK(sum == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unique level probability") {
  CHECK(unique_levels_prob(1, 5) == 1.0);
  CHECK(unique_levels_prob(2, 2) == 0.5);
  CHECK(unique_levels_prob(3, 3) == Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(unique_levels_prob(4, 3) == 0.0);
  CHECK(unique_levels_prob(0, 3) == 1.0);
}

TEST_CASE("forwarder probability") {
  CHECK(forwarders_prob(1, 0, 2, 0.25) == Approx(0.25).epsilon(1e-15));
  CHECK(forwarders_prob(1, 1, 2, 0.25) == Approx(0.0625).epsilon(1e-15));
  CHECK(forwarders_prob(4, 5, 6, 0.1) == Approx(std::pow(0.1, 6)).epsilon(1e-14));
  CHECK_THROWS_AS(forwarders_prob(1, 0, 2, 0.6), ParameterError);
  CHECK_THROWS_AS(forwarders_prob(1, 2, 2, 0.1), ParameterError);
}

TEST_CASE("tagged combinations") {
  for (int n = 0; n < 20; ++n) CHECK(tagged_combinations(n, 0) == 1);
  CHECK(tagged_combinations(1, 1) == 3);
  CHECK(tagged_combinations(2, 1) == 5);
  CHECK(tagged_combinations(9, 2) == 271);
  CHECK_THROWS_AS(tagged_combinations(1 << 20, 4), OverflowError);
  CHECK_THROWS_AS(tagged_combinations(1, 64), OverflowError);
}

TEST_CASE("conditional success worked values") {
  CHECK(cond_success(3, noma(5, 1, 1, 0.4)) == Approx(capture_prob(3, 0.4, 0.0)).epsilon(1e-15));
  // Enumeration-derived value for n=1, K=2, L=2, eps_u=0.5.
  CHECK(cond_success(1, noma(2, 2, 2, 0.5)) == Approx(0.34375).epsilon(1e-14));
  auto ideal = noma(1, 2, 1, 0.3);
  ideal.scheme = Scheme::IdealPhase2;
  CHECK(cond_success(0, ideal) == Approx(0.91).epsilon(1e-14));
  CHECK_THROWS_AS(cond_success(2, noma(2, 2, 2, 0.5)), ParameterError);
}

TEST_CASE("conditional success matches exhaustive enumeration") {
  for (int users = 1; users <= 3; ++users)
    for (int relays = 1; relays <= 3; ++relays)
      for (int levels = 1; levels <= 3; ++levels)
        for (double eps : {0.2, 0.5, 0.8})
          for (int n = 0; n < users; ++n) {
            auto p = noma(users, relays, levels, eps);
            CAPTURE(users);
            CAPTURE(relays);
            CAPTURE(levels);
            CAPTURE(eps);
            CAPTURE(n);
            CHECK(std::abs(cond_success(n, p) -
                           oracle::enumerate_cond_success(n, relays, levels, eps, Scheme::NomaMr)) <= 1e-12);
            p.scheme = Scheme::OmaMru;
            CHECK(std::abs(cond_success(n, p) -
                           oracle::enumerate_cond_success(n, relays, levels, eps, Scheme::OmaMru)) <= 1e-12);
            p.scheme = Scheme::IdealPhase2;
            CHECK(std::abs(cond_success(n, p) -
                           oracle::enumerate_cond_success(n, relays, levels, eps, Scheme::IdealPhase2)) <= 1e-12);
          }
}

TEST_CASE("success probability") {
  auto lone = noma(1, 1, 1, 0.0);
  CHECK(success_prob(lone, 0.37) == 1.0);
  CHECK_THROWS_AS(success_prob(lone, 0.0), ParameterError);

  // Cached model against the term-by-term mixture.
  auto p = noma(30, 4, 3, 0.3);
  p.p = 0.05;
  for (double theta : {0.1, 0.5, 1.0}) {
    const double expected = oracle::mixture(30, theta * p.p, [&](int n) { return cond_success(n, p); });
    CHECK(success_prob(p, theta) == Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("success probability reduces to OMA at L=1") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> users(1, 60), relays(1, 8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = noma(users(rng), relays(rng), 1, unit(rng));
    p.p = std::max(1e-6, unit(rng));
    const double theta = std::max(1e-6, unit(rng));
    auto oma = p;
    oma.scheme = Scheme::OmaMru;
    REQUIRE(std::abs(success_prob(p, theta) - success_prob(oma, theta)) <= 1e-12);
  }
}

TEST_CASE("probabilities stay in range") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> users(1, 64), relays(1, 8), levels(1, 40);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    auto p = noma(users(rng), relays(rng), levels(rng), unit(rng));
    p.p = std::max(1e-9, unit(rng));
    p.scheme = static_cast<Scheme>(trial % 3);
    const int n = std::uniform_int_distribution<int>(0, p.users - 1)(rng);
    const double qhat = capture_prob(n, p.eps_u, 0.0);
    const double values[] = {qhat,
                             transmitters_pmf(n, p.users, unit(rng), p.p),
                             unique_levels_prob(std::uniform_int_distribution<int>(0, 50)(rng), p.levels),
                             cond_success(n, p),
                             occupancy_theta(std::uniform_int_distribution<int>(1, 100)(rng), p.p, unit(rng))};
    for (double v : values) {
      REQUIRE((v >= 0.0 && v <= 1.0));
    }
    if (trial % 50 == 0) {
      const double q = success_prob(p, std::max(1e-9, unit(rng)));
      REQUIRE((q >= 0.0 && q <= 1.0));
    }
  }
}

TEST_CASE("sum over forwarder counts equals the ideal phase 2") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n <= 16; ++n)
    for (int relays = 1; relays <= 8; ++relays)
      for (int draw = 0; draw < 5; ++draw) {
        const double qhat = capture_prob(n, unit(rng), 0.0);
        double sum = 0.0;
        for (int k = 0; k < relays; ++k)
          sum += static_cast<double>(tagged_combinations(n, k)) * forwarders_prob(n, k, relays, qhat);
        REQUIRE(std::abs(sum - (1.0 - std::pow(1.0 - qhat, relays))) <= 1e-12);
      }
}

TEST_CASE("large L approaches the ideal phase 2") {
  auto p = noma(30, 6, 64, 0.3);
  p.p = 2.0 / 30;
  auto ideal = p;
  ideal.scheme = Scheme::IdealPhase2;
  const double theta = 0.4;
  const double q_ideal = success_prob(ideal, theta);
  double prev_gap = 0.0;
  for (int levels = 64; levels <= 4096; levels *= 2) {
    p.levels = levels;
    const double gap = q_ideal - success_prob(p, theta);
    CHECK(gap > 0.0);
    if (prev_gap > 0.0) {
      CHECK(gap < prev_gap);
      CHECK(gap / prev_gap >= 0.4);
      CHECK(gap / prev_gap <= 0.6);
    }
    prev_gap = gap;
  }
}

TEST_CASE("conditional success is non-decreasing in L") {
  for (int relays = 1; relays <= 8; ++relays)
    for (double eps : {0.1, 0.3, 0.6, 0.9})
      for (int n : {0, 1, 3, 10}) {
        double prev = -1.0;
        for (int levels = 1; levels <= 40; ++levels) {
          const double q = cond_success(n, noma(n + 1, relays, levels, eps));
          CHECK(q >= prev - 1e-15);
          prev = q;
        }
      }
}

TEST_CASE("occupancy and average age") {
  CHECK(occupancy_theta(1, 0.3, 0.8) == 1.0);
  CHECK(occupancy_theta(7, 0.3, 0.0) == 1.0);
  CHECK(occupancy_theta(2, 1.0, 1.0) == 0.5);

  CHECK(aaoi_formula(1, 0.25, 0.5) == Approx(8.0).epsilon(1e-14));
  CHECK(aaoi_formula(1, 1.0, 1.0) == 1.0);
  CHECK(aaoi_formula(2, 1.0, 1.0) == 1.5);
  CHECK_THROWS_AS(aaoi_formula(3, 0.0, 0.5), UnreachableSinkError);
  CHECK_THROWS_AS(aaoi_formula(3, 0.5, 0.0), UnreachableSinkError);
}

TEST_CASE("binomial coefficients") {
  CHECK(binomial(64, 32) == 1832624140942590534.0);
  CHECK(binomial(5, 7) == 0.0);
  CHECK(binomial(100, 3) == 161700.0);
}

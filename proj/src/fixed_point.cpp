#include "adnoma/fixed_point.hpp"

#include <cmath>
#include <limits>

namespace adnoma {

namespace {

constexpr double kMinDamping = 1.0 / 1024.0;

}  // namespace

FixedPointResult solve_fixed_point(const ModelParams& params, const FixedPointOptions& opts) {
  params.validate();
  return solve_fixed_point(SuccessModel(params), params, opts);
}

FixedPointResult solve_fixed_point(const SuccessModel& model, const ModelParams& params,
                                   const FixedPointOptions& opts) {
  if (!(params.p > 0.0 && params.p <= 1.0)) throw ParameterError("p", "must lie in (0, 1]");
  if (params.delta < 1) throw ParameterError("delta", "must be >= 1");
  if (!(opts.tol > 0.0)) throw ParameterError("tol", "must be > 0");
  if (opts.max_iter < 1) throw ParameterError("max_iter", "must be >= 1");

  const double p = params.p;
  const int delta = params.delta;
  auto f = [&](double q) { return model(occupancy_theta(delta, p, q), p); };

  FixedPointResult res;
  double q = opts.initial_q;
  double alpha = opts.damping;
  double prev_step = 0.0;
  double step = f(q) - q;
  int it = 0;
  while (std::abs(step) > opts.tol && it < opts.max_iter) {
    // A sign flip that does not shrink the step means we are bouncing.
    if (prev_step != 0.0 && step * prev_step < 0.0 && std::abs(step) >= std::abs(prev_step) &&
        alpha > kMinDamping)
      alpha *= 0.5;
    q += alpha * step;
    prev_step = step;
    step = f(q) - q;
    ++it;
  }
  // Polish with plain updates while they keep shrinking the residual.
  for (int polish = 0; polish < 4 && std::abs(step) <= opts.tol && step != 0.0; ++polish) {
    const double next = q + step;
    const double next_step = f(next) - next;
    if (std::abs(next_step) > std::abs(step)) break;
    q = next;
    step = next_step;
  }

  res.q_star = q;
  res.theta_star = occupancy_theta(delta, p, q);
  res.iterations = it;
  res.residual = std::abs(step);
  res.converged = res.residual <= opts.tol;
  res.aaoi = p * q > 0.0 ? aaoi_formula(delta, p, q) : std::numeric_limits<double>::infinity();
  return res;
}

}  // namespace adnoma

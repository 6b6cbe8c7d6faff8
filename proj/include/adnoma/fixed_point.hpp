#pragma once

#include "adnoma/analytic.hpp"
#include "adnoma/model.hpp"

namespace adnoma {

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 100000;
  double damping = 0.5;
  double initial_q = 1.0;
};

struct FixedPointResult {
  double q_star = 0.0;
  double theta_star = 1.0;
  double aaoi = 0.0;  // +inf when p·q* == 0
  int iterations = 0;
  bool converged = false;
  double residual = 0.0;  // |q* - f(q*)|
};

/// Solves q = f(q) with f(q) = success_prob(θ(q)). Never throws on
/// non-convergence; check `converged` and `residual`.
FixedPointResult solve_fixed_point(const ModelParams& params, const FixedPointOptions& opts = {});

/// Same, reusing a prebuilt SuccessModel for (N, K, L, ε, scheme). Only
/// params.p and params.delta are read.
FixedPointResult solve_fixed_point(const SuccessModel& model, const ModelParams& params,
                                   const FixedPointOptions& opts = {});

}  // namespace adnoma

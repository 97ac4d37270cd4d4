#pragma once

#include "vilab/core.hpp"

namespace vilab {

inline constexpr double kFeasibilityTol = 1e-9;

/// Throws InfeasiblePointError when x is farther than kFeasibilityTol from
/// the feasible set.
void require_feasible(const VIProblem& problem, const Vector& x,
                      const char* where);

/// M(x; t) = Proj_X(x - t F(x)).
Vector grad_proj_map(const VIProblem& problem, const Vector& x, double t);

/// M+(x; t) = Proj_X(x - t F(M(x; t))).
Vector extra_grad_proj_map(const VIProblem& problem, const Vector& x, double t);

/// Both maps at once; `half` is M(x; t), `full` is M+(x; t).
struct ExtraGradientStep {
  Vector half;
  Vector full;
};
ExtraGradientStep extra_gradient_step(const VIProblem& problem, const Vector& x,
                                      double t);

}  // namespace vilab

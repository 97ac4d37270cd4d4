#pragma once

#include "vilab/core.hpp"

#include <cstdint>
#include <span>

namespace vilab {

/// Gap function G(x) = max_{y in X} <F(x), x - y>, evaluated exactly with the
/// set's linear-minimization oracle. Tiny negatives (>= -1e-12) clamp to 0.
double gap(const VIProblem& problem, const Vector& x);

/// Lower bound on the dual gap H(x) = max_{y in X} <F(y), x - y> taken over
/// {x} and probe_points(set, samples, seed). Always >= 0.
double dual_gap_estimate(const VIProblem& problem, const Vector& x,
                         std::size_t samples, std::uint64_t seed);

/// Same estimator over an explicit point set (x itself is always included).
double dual_gap_over(const VIProblem& problem, const Vector& x,
                     std::span<const Vector> points);

/// P(x) = ||M(x; t) - x||^2.
double proj_residual(const VIProblem& problem, const Vector& x, double t);

struct MeritReport {
  double gap = 0.0;
  double dual_gap_estimate = 0.0;
  std::size_t sample_count = 0;
  double proj_residual = 0.0;
  double step = 0.0;
  double epsilon = 0.0;
  bool epsilon_vi = false;
  // Necessary-condition check only: H is estimated from below.
  bool epsilon_minty = false;
};

MeritReport merit_report(const VIProblem& problem, const Vector& x, double t,
                         double epsilon, std::size_t samples,
                         std::uint64_t seed);

}  // namespace vilab

#include "vilab/merit.hpp"

#include "vilab/projection.hpp"
#include "vilab/sampling.hpp"

#include <algorithm>

namespace vilab {

double gap(const VIProblem& problem, const Vector& x) {
  require_feasible(problem, x, "gap");
  const Vector fx = problem.evaluate(x);
  const auto lm = problem.set.linear_minimize(fx);
  double g = fx.dot(x - lm.point);
  if (g <= 0.0 && g >= -1e-12) g = 0.0;
  return g;
}

double dual_gap_over(const VIProblem& problem, const Vector& x,
                     std::span<const Vector> points) {
  require_feasible(problem, x, "dual_gap_estimate");
  double best = 0.0;  // y = x
  for (const auto& y : points) {
    best = std::max(best, problem.evaluate(y).dot(x - y));
  }
  return best;
}

double dual_gap_estimate(const VIProblem& problem, const Vector& x,
                         std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ConfigError("dual_gap_estimate: samples must be positive");
  const auto points = probe_points(problem.set, samples, seed);
  return dual_gap_over(problem, x, points);
}

double proj_residual(const VIProblem& problem, const Vector& x, double t) {
  return (grad_proj_map(problem, x, t) - x).squaredNorm();
}

MeritReport merit_report(const VIProblem& problem, const Vector& x, double t,
                         double epsilon, std::size_t samples,
                         std::uint64_t seed) {
  MeritReport r;
  r.gap = gap(problem, x);
  const auto points = probe_points(problem.set, samples, seed);
  r.sample_count = points.size() + 1;
  r.dual_gap_estimate = dual_gap_over(problem, x, points);
  r.proj_residual = proj_residual(problem, x, t);
  r.step = t;
  r.epsilon = epsilon;
  r.epsilon_vi = r.gap <= epsilon;
  r.epsilon_minty = r.dual_gap_estimate <= epsilon;
  return r;
}

}  // namespace vilab

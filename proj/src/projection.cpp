#include "vilab/projection.hpp"

#include <sstream>

namespace vilab {

void require_feasible(const VIProblem& problem, const Vector& x,
                      const char* where) {
  if (static_cast<std::size_t>(x.size()) != problem.dimension()) {
    std::ostringstream os;
    os << where << ": point has dimension " << x.size() << ", problem '"
       << problem.name << "' has dimension " << problem.dimension();
    throw DimensionError(os.str());
  }
  const double dist = problem.set.distance(x);
  if (dist > kFeasibilityTol) {
    std::ostringstream os;
    os << where << ": point is infeasible for '" << problem.name
       << "' (distance " << dist << ")";
    throw InfeasiblePointError(os.str());
  }
}

namespace {

void require_step(double t) {
  if (!(t > 0.0)) throw ConfigError("step t must be positive");
}

}  // namespace

Vector grad_proj_map(const VIProblem& problem, const Vector& x, double t) {
  require_step(t);
  require_feasible(problem, x, "grad_proj_map");
  return problem.set.project(x - t * problem.evaluate(x));
}

ExtraGradientStep extra_gradient_step(const VIProblem& problem, const Vector& x,
                                      double t) {
  require_step(t);
  require_feasible(problem, x, "extra_grad_proj_map");
  Vector half = problem.set.project(x - t * problem.evaluate(x));
  Vector full = problem.set.project(x - t * problem.evaluate(half));
  return {std::move(half), std::move(full)};
}

Vector extra_grad_proj_map(const VIProblem& problem, const Vector& x, double t) {
  return extra_gradient_step(problem, x, t).full;
}

}  // namespace vilab

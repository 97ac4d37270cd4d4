#include "vilab/solvers.hpp"

#include "vilab/merit.hpp"
#include "vilab/projection.hpp"

#include <cmath>
#include <sstream>

namespace vilab {

namespace {

Trajectory start_trajectory(const VIProblem& problem, SolverKind kind,
                            const SolverConfig& config) {
  Trajectory traj;
  traj.problem_name = problem.name;
  traj.solver = kind;
  traj.step = config.step;
  traj.order = kind == SolverKind::ARE ? config.order : 1;
  traj.iterates.reserve(config.max_iters);
  return traj;
}

class DivergenceGuard {
 public:
  explicit DivergenceGuard(const FeasibleSet& set)
      : limit_(10.0 * (set.center().norm() + set.diameter()) + 1e-12) {}

  void check(const Vector& x, Trajectory& traj) const {
    if (!x.allFinite() || x.norm() > limit_) {
      std::ostringstream os;
      os << "iterate left the feasible region after " << traj.iterates.size()
         << " iterations (norm " << x.norm() << ", limit " << limit_ << ")";
      throw SolverError(os.str(), std::move(traj));
    }
  }

 private:
  double limit_;
};

void finish(Trajectory& traj, const VIProblem& problem,
            const SolverConfig& config, Vector last) {
  traj.final_x = std::move(last);
  traj.k_min = traj.argmin_residual(traj.iterates.size());
  record_gaps(traj, problem, config.record_gap_every);
}

// Shared by EG and ARE p = 1 so the two produce identical step sizes.
double clamped_extragradient_step(const VIProblem& problem, double step,
                                  Trajectory& traj) {
  if (!problem.lipschitz) return step;
  const double bound = 1.0 / (std::sqrt(2.0) * *problem.lipschitz);
  if (step > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "step " << step << " exceeds 1/(sqrt(2) L) = " << bound
       << "; clamped";
    traj.warnings.push_back(os.str());
    return bound;
  }
  return step;
}

// Runs the extra-gradient recursion; `traj.solver` decides the label.
Trajectory run_extragradient(const VIProblem& problem,
                             const SolverConfig& config, const Vector& x0,
                             SolverKind kind) {
  validate_config(config);
  require_feasible(problem, x0, "solver start point");
  Trajectory traj = start_trajectory(problem, kind, config);
  const double t = clamped_extragradient_step(problem, config.step, traj);
  traj.step = t;
  if (kind == SolverKind::ARE) {
    traj.order = 1;
    traj.tau = t * lipschitz_or_estimate(problem);
    if (traj.tau >= 1.0) {
      traj.warnings.push_back("effective tau = step * L >= 1");
    }
  }
  const DivergenceGuard guard(problem.set);

  Vector x = x0;
  for (std::size_t k = 0; k < config.max_iters; ++k) {
    Vector half = problem.set.project(x - t * problem.evaluate(x));
    Vector next = problem.set.project(x - t * problem.evaluate(half));
    guard.check(next, traj);
    IterateRecord rec;
    rec.k = k;
    rec.residual_sq = (half - x).squaredNorm();
    if (kind == SolverKind::ARE) rec.gamma = 1.0 / t;
    rec.x = std::move(x);
    rec.x_half = std::move(half);
    traj.iterates.push_back(std::move(rec));
    x = std::move(next);
  }
  finish(traj, problem, config, std::move(x));
  return traj;
}

double spectral_norm(const Matrix& m) {
  return m.jacobiSvd().singularValues()(0);
}

struct InnerResult {
  Vector x;
  std::size_t iters = 0;
  double residual = 0.0;
};

// Extra-gradient on the regularized Taylor model
//   G(x) = F(x^k) + J (x - x^k) + L2 ||x - x^k|| (x - x^k)
// with a Khobotov-type adaptive step (s ||G(y) - G(x)|| <= 0.9 ||y - x||).
InnerResult solve_are_subproblem(const VIProblem& problem, const Vector& xk,
                                 const Vector& fk, const Matrix& jk, double l2,
                                 const SolverConfig& config) {
  const auto& set = problem.set;
  auto model = [&](const Vector& x) -> Vector {
    const Vector r = x - xk;
    return fk + jk * r + (l2 * r.norm()) * r;
  };
  const double lip0 = spectral_norm(jk) + 3.0 * l2 * set.diameter();
  double s = 1.0 / std::max(lip0, 1e-12);
  const double s_max = 1e6;

  InnerResult out{xk, 0, 0.0};
  Vector gx = model(out.x);
  for (; out.iters < config.inner_max_iters; ++out.iters) {
    out.residual = (out.x - set.project(out.x - gx)).norm();
    if (out.residual <= config.inner_tol) return out;

    Vector y = set.project(out.x - s * gx);
    Vector gy = model(y);
    double dy = (y - out.x).norm();
    while (dy > 0.0 && s * (gy - gx).norm() > 0.9 * dy) {
      s *= 0.5;
      y = set.project(out.x - s * gx);
      gy = model(y);
      dy = (y - out.x).norm();
    }
    out.x = set.project(out.x - s * gy);
    gx = model(out.x);
    s = std::min(1.5 * s, s_max);
  }
  out.residual = (out.x - set.project(out.x - gx)).norm();
  if (out.residual <= config.inner_tol) return out;
  std::ostringstream os;
  os << "ARE subproblem did not reach inner_tol " << config.inner_tol
     << " within " << config.inner_max_iters << " iterations (residual "
     << out.residual << ")";
  throw Error(os.str());
}

Trajectory run_are_second_order(const VIProblem& problem,
                                const SolverConfig& config, const Vector& x0) {
  validate_config(config);
  if (!problem.jacobian) {
    throw ConfigError("ARE p=2 requires a Jacobian for '" + problem.name + "'");
  }
  if (!problem.lipschitz_p) {
    throw ConfigError("ARE p=2 requires lipschitz_p for '" + problem.name + "'");
  }
  require_feasible(problem, x0, "solver start point");
  Trajectory traj = start_trajectory(problem, SolverKind::ARE, config);
  traj.order = 2;
  traj.tau = config.tau;
  const double l2 = *problem.lipschitz_p;
  const DivergenceGuard guard(problem.set);

  Vector x = x0;
  for (std::size_t k = 0; k < config.max_iters; ++k) {
    const Vector fk = problem.evaluate(x);
    const Matrix jk = problem.evaluate_jacobian(x);
    InnerResult inner;
    try {
      inner = solve_are_subproblem(problem, x, fk, jk, l2, config);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "iteration " << k << ": " << e.what();
      traj.final_x = x;
      throw SolverError(os.str(), std::move(traj));
    }
    const double dist = (inner.x - x).norm();
    const double gamma = l2 * dist;
    Vector next = x;
    if (gamma > 0.0) {
      next = problem.set.project(x - problem.evaluate(inner.x) / gamma);
    }
    guard.check(next, traj);
    IterateRecord rec;
    rec.k = k;
    rec.residual_sq = dist * dist;
    rec.gamma = gamma;
    rec.inner_iters = inner.iters;
    rec.x = std::move(x);
    rec.x_half = std::move(inner.x);
    traj.iterates.push_back(std::move(rec));
    x = std::move(next);
  }
  finish(traj, problem, config, std::move(x));
  return traj;
}

}  // namespace

Trajectory solve_gp(const VIProblem& problem, const SolverConfig& config,
                    const Vector& x0) {
  validate_config(config);
  require_feasible(problem, x0, "solver start point");
  Trajectory traj = start_trajectory(problem, SolverKind::GP, config);
  const double t = config.step;
  const DivergenceGuard guard(problem.set);

  Vector x = x0;
  for (std::size_t k = 0; k < config.max_iters; ++k) {
    Vector next = problem.set.project(x - t * problem.evaluate(x));
    guard.check(next, traj);
    IterateRecord rec;
    rec.k = k;
    rec.residual_sq = (next - x).squaredNorm();
    rec.x = std::move(x);
    traj.iterates.push_back(std::move(rec));
    x = std::move(next);
  }
  finish(traj, problem, config, std::move(x));
  return traj;
}

Trajectory solve_eg(const VIProblem& problem, const SolverConfig& config,
                    const Vector& x0) {
  return run_extragradient(problem, config, x0, SolverKind::EG);
}

Trajectory solve_are(const VIProblem& problem, const SolverConfig& config,
                     const Vector& x0) {
  if (config.order == 1) {
    return run_extragradient(problem, config, x0, SolverKind::ARE);
  }
  return run_are_second_order(problem, config, x0);
}

Trajectory solve(SolverKind kind, const VIProblem& problem,
                 const SolverConfig& config, const Vector& x0) {
  switch (kind) {
    case SolverKind::GP: return solve_gp(problem, config, x0);
    case SolverKind::EG: return solve_eg(problem, config, x0);
    case SolverKind::ARE: return solve_are(problem, config, x0);
  }
  throw ConfigError("unknown solver");
}

std::string to_string(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::GP_LEMMA: return "GP_LEMMA";
    case InequalityKind::EG_LEMMA: return "EG_LEMMA";
    case InequalityKind::ARE_INEQ: return "ARE_INEQ";
  }
  return "UNKNOWN";
}

std::vector<double> assert_iteration_inequality(InequalityKind kind,
                                                const Trajectory& trajectory,
                                                const VIProblem& problem,
                                                const Vector& reference_point) {
  const SolverKind expected = kind == InequalityKind::GP_LEMMA ? SolverKind::GP
                              : kind == InequalityKind::EG_LEMMA
                                  ? SolverKind::EG
                                  : SolverKind::ARE;
  if (trajectory.solver != expected) {
    throw ConfigError(to_string(kind) + " does not apply to a " +
                      to_string(trajectory.solver) + " trajectory");
  }
  require_feasible(problem, reference_point, "reference point");
  const Vector& ref = reference_point;
  const double t = trajectory.step;

  std::vector<double> slacks;
  slacks.reserve(trajectory.iterates.size());
  for (std::size_t k = 0; k < trajectory.iterates.size(); ++k) {
    const auto& rec = trajectory.iterates[k];
    const Vector& xk = rec.x;
    const Vector& next = trajectory.next_iterate(k);
    const double before = (xk - ref).squaredNorm();
    const double after = (next - ref).squaredNorm();
    double slack = 0.0;
    switch (kind) {
      case InequalityKind::GP_LEMMA: {
        const double rhs = 0.5 * after +
                           t * problem.evaluate(xk).dot(next - ref) +
                           0.5 * (next - xk).squaredNorm();
        slack = 0.5 * before - rhs;
        break;
      }
      case InequalityKind::EG_LEMMA: {
        const Vector& half = *rec.x_half;
        const double lhs = problem.evaluate(half).dot(half - ref) +
                           (half - xk).squaredNorm() / (4.0 * t);
        slack = (before - after) / (2.0 * t) - lhs;
        break;
      }
      case InequalityKind::ARE_INEQ: {
        const Vector& half = *rec.x_half;
        const double gamma = rec.gamma.value_or(0.0);
        const double tau = trajectory.tau;
        const double lhs = problem.evaluate(half).dot(half - ref) +
                           0.5 * gamma * (1.0 - tau * tau) *
                               (half - xk).squaredNorm();
        slack = 0.5 * gamma * (before - after) - lhs;
        break;
      }
    }
    slacks.push_back(slack);
  }
  return slacks;
}

double estimate_lipschitz(const VIProblem& problem, std::size_t pairs,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const Vector a = problem.set.sample(rng);
    const Vector b = problem.set.sample(rng);
    const double d = (a - b).norm();
    if (d < 1e-12) continue;
    best = std::max(best, (problem.evaluate(a) - problem.evaluate(b)).norm() / d);
  }
  return best > 0.0 ? 1.2 * best : 1.0;
}

double lipschitz_or_estimate(const VIProblem& problem) {
  return problem.lipschitz ? *problem.lipschitz : estimate_lipschitz(problem);
}

void record_gaps(Trajectory& trajectory, const VIProblem& problem,
                 std::size_t every) {
  auto& its = trajectory.iterates;
  if (its.empty()) return;
  for (std::size_t k = 0; k < its.size(); ++k) {
    const bool wanted = (every > 0 && k % every == 0) ||
                        k == trajectory.k_min || k + 1 == its.size();
    if (wanted && !its[k].gap) {
      its[k].gap = gap(problem, trajectory.test_point(k));
    }
  }
}

}  // namespace vilab

#pragma once

#include "vilab/core.hpp"

#include <cstdint>
#include <vector>

namespace vilab {

/// Raised when a run cannot continue. Carries the trajectory up to the last
/// valid iterate.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, Trajectory partial)
      : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Gradient projection: x^{k+1} = M(x^k; t).
Trajectory solve_gp(const VIProblem& problem, const SolverConfig& config,
                    const Vector& x0);

/// Extra-gradient: x^{k+0.5} = M(x^k; t), x^{k+1} = M+(x^k; t).
///
/// When the problem declares a Lipschitz constant L the step is clamped to
/// 1/(sqrt(2) L) and a warning is attached to the trajectory.
Trajectory solve_eg(const VIProblem& problem, const SolverConfig& config,
                    const Vector& x0);

/// Approximation-based regularized extra-gradient, order p in {1, 2}.
///
/// p = 1 approximates F(x) by F(x^k) and regularizes with gamma = 1/step, so
/// both half-steps are single projections; the step follows the same clamp
/// as solve_eg and the approximation quality in effect is tau = step * L.
///
/// p = 2 approximates F by its first-order Taylor model at x^k and solves
///   VI_X( F(x^k) + J(x^k)(x - x^k) + L_2 ||x - x^k|| (x - x^k) )
/// with an inner extra-gradient loop (adaptive step, warm-started at x^k) to
/// natural-residual tolerance config.inner_tol. Requires a Jacobian and
/// lipschitz_p on the problem. tau is taken from config.tau.
Trajectory solve_are(const VIProblem& problem, const SolverConfig& config,
                     const Vector& x0);

Trajectory solve(SolverKind kind, const VIProblem& problem,
                 const SolverConfig& config, const Vector& x0);

enum class InequalityKind { GP_LEMMA, EG_LEMMA, ARE_INEQ };

std::string to_string(InequalityKind kind);

/// Per-iteration slack (right-hand side minus left-hand side) of the
/// descent inequality that drives each method's analysis, evaluated with
/// the given reference point:
///   GP_LEMMA  1/2||x^k-x||^2 >= 1/2||x^{k+1}-x||^2 + t<F(x^k), x^{k+1}-x>
///             + 1/2||x^{k+1}-x^k||^2
///   EG_LEMMA  <F(x^{k+.5}), x^{k+.5}-x> + 1/(4t)||x^{k+.5}-x^k||^2
///             <= 1/(2t)[||x^k-x||^2 - ||x^{k+1}-x||^2]        (t <= 1/(sqrt2 L))
///   ARE_INEQ  <F(x^{k+.5}), x^{k+.5}-x> + gamma_k/2 (1-tau^2)||x^{k+.5}-x^k||^2
///             <= gamma_k/2 [||x^k-x||^2 - ||x^{k+1}-x||^2]
/// Callers assert slack >= -1e-8.
std::vector<double> assert_iteration_inequality(InequalityKind kind,
                                                const Trajectory& trajectory,
                                                const VIProblem& problem,
                                                const Vector& reference_point);

/// max ||F(a)-F(b)|| / ||a-b|| over `pairs` seeded feasible pairs, times 1.2.
double estimate_lipschitz(const VIProblem& problem, std::size_t pairs = 10000,
                          std::uint64_t seed = 0x5eedULL);

/// problem.lipschitz if declared, otherwise estimate_lipschitz(problem).
double lipschitz_or_estimate(const VIProblem& problem);

/// Fills record.gap at the trajectory's test points: every `every` records
/// (0 = none), plus always at k_min and at the last record.
void record_gaps(Trajectory& trajectory, const VIProblem& problem,
                 std::size_t every);

}  // namespace vilab

#pragma once

#include "vilab/conditions.hpp"
#include "vilab/core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace vilab {

using ScalarFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;
using PayoffFn = std::function<double(const Vector& x, const Vector& y)>;
using PartialGradientFn = std::function<Vector(const Vector& x, const Vector& y)>;

inline constexpr double kFiniteDifferenceStep = 1e-6;
inline constexpr double kStationarityTol = 1e-8;

/// Central differences with step h.
Vector numeric_gradient(const ScalarFn& f, const Vector& x,
                        double h = kFiniteDifferenceStep);

/// Differentiable objective for min f(x) over a feasible set. A missing
/// gradient falls back to central differences.
struct ScalarObjective {
  std::string name;
  ScalarFn value;
  std::optional<GradientFn> gradient;
  FeasibleSet set = FeasibleSet::interval(-1.0, 1.0);
  bool convex = false;

  Vector grad(const Vector& x) const;
};

/// x: min_{x in X} theta_x(x, y);  y: min_{y in Y} theta_y(x, y).
struct TwoPlayerGame {
  std::string name;
  PayoffFn theta_x;
  PayoffFn theta_y;
  std::optional<PartialGradientFn> grad_x;  // d theta_x / dx
  std::optional<PartialGradientFn> grad_y;  // d theta_y / dy
  FeasibleSet set_x = FeasibleSet::interval(-1.0, 1.0);
  FeasibleSet set_y = FeasibleSet::interval(-1.0, 1.0);
  bool block_multiconvex = false;
  std::vector<std::pair<Vector, Vector>> known_equilibria;

  Vector partial_x(const Vector& x, const Vector& y) const;
  Vector partial_y(const Vector& x, const Vector& y) const;
};

/// Largest relative error between the analytic and central-difference
/// partial gradients over `points` seeded feasible points. 0 when the game
/// has no analytic gradients.
double gradient_cross_check(const TwoPlayerGame& game, std::size_t points = 10,
                            std::uint64_t seed = 11);

/// F(z) = (grad_x theta_x(x, y); grad_y theta_y(x, y)) on X x Y.
VIProblem game_to_vi(const TwoPlayerGame& game);

struct PlayerWitness {
  char player = 'x';
  Vector point;
  double value = 0.0;
};

struct EquilibriumVerdict {
  Verdict verdict = Verdict::SATISFIED_ON_SAMPLES;
  std::optional<PlayerWitness> witness;
  bool satisfied() const { return verdict == Verdict::SATISFIED_ON_SAMPLES; }
};

struct EquilibriumReport {
  Vector x;
  Vector y;
  EquilibriumVerdict is_qne;  // exact per-player stationarity gaps
  EquilibriumVerdict is_ne;   // sampled best-response check
  EquilibriumVerdict is_mne;  // sampled per-player Minty inequalities
  double gap_x = 0.0;
  double gap_y = 0.0;
};

/// QNE from exact per-player gaps (<= kStationarityTol); NE and MNE on
/// probe_points of each player's set, augmented with points along the
/// stationarity-witness direction and along segments to any sampled better
/// response.
EquilibriumReport classify_equilibrium(const TwoPlayerGame& game,
                                       const Vector& x, const Vector& y,
                                       std::size_t samples, std::uint64_t seed);

struct MintyOptimalityReport {
  EquilibriumVerdict minty;
  EquilibriumVerdict global;
};

/// Minty inequality <grad f(x), x - c> >= 0 and global minimality
/// f(c) <= f(x) at the same sampled points; every sampled improvement x
/// adds the segment [x, c] to the Minty sample set.
MintyOptimalityReport check_minty_optimality(const ScalarObjective& f,
                                             const Vector& candidate,
                                             std::size_t samples,
                                             std::uint64_t seed);

const std::vector<TwoPlayerGame>& game_library();
const TwoPlayerGame& get_game(const std::string& name);

const std::vector<ScalarObjective>& objective_library();
const ScalarObjective& get_objective(const std::string& name);

/// The optimization problem as VI(grad f; X).
VIProblem objective_to_vi(const ScalarObjective& f);

}  // namespace vilab

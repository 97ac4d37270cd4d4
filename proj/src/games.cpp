#include "vilab/games.hpp"

#include "vilab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vilab {

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

Vector concat(const Vector& a, const Vector& b) {
  Vector out(a.size() + b.size());
  out << a, b;
  return out;
}

constexpr int kSegmentPoints = 64;
constexpr int kDirectionalHalvings = 40;

struct PlayerChecks {
  double gap = 0.0;
  EquilibriumVerdict qne;
  EquilibriumVerdict ne;
  EquilibriumVerdict mne;
};

void mark(EquilibriumVerdict& v, char player, const Vector& p, double value) {
  if (!v.witness || value < v.witness->value) {
    v.verdict = Verdict::VIOLATED;
    v.witness = PlayerWitness{player, p, value};
  }
}

// Stationarity, best response and Minty inequality for one player whose
// objective (opponent fixed) is `value`.
PlayerChecks check_player(char player, const FeasibleSet& set,
                          const ScalarFn& value, const GradientFn& grad,
                          const Vector& c, std::size_t samples,
                          std::uint64_t seed) {
  PlayerChecks out;
  const Vector gc = grad(c);
  const auto lm = set.linear_minimize(gc);
  out.gap = std::max(0.0, gc.dot(c - lm.point));
  if (out.gap > kStationarityTol) mark(out.qne, player, lm.point, -out.gap);

  std::vector<Vector> points = probe_points(set, samples, seed);
  if ((lm.point - c).norm() > 0.0) {
    double step = 1.0;
    for (int j = 0; j <= kDirectionalHalvings; ++j, step *= 0.5) {
      points.push_back(set.project(c + step * (lm.point - c)));
    }
  }

  const double fc = value(c);
  const double ne_tol = 1e-12 * (1.0 + std::abs(fc));
  auto minty_at = [&](const Vector& p) {
    const double v = grad(p).dot(p - c);
    if (v < -kConditionTol) mark(out.mne, player, p, v);
  };
  for (const auto& s : points) {
    minty_at(s);
    const double improvement = value(s) - fc;
    if (improvement < -ne_tol) {
      mark(out.ne, player, s, improvement);
      for (int i = 0; i < kSegmentPoints; ++i) {
        const double lambda = (i + 0.5) / kSegmentPoints;
        minty_at(s + lambda * (c - s));
      }
    }
  }
  return out;
}

EquilibriumVerdict combine(const EquilibriumVerdict& a,
                           const EquilibriumVerdict& b) {
  if (!a.witness) return b;
  if (!b.witness) return a;
  return a.witness->value <= b.witness->value ? a : b;
}

}  // namespace

Vector numeric_gradient(const ScalarFn& f, const Vector& x, double h) {
  Vector g(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Vector ScalarObjective::grad(const Vector& x) const {
  return gradient ? (*gradient)(x) : numeric_gradient(value, x);
}

Vector TwoPlayerGame::partial_x(const Vector& x, const Vector& y) const {
  if (grad_x) return (*grad_x)(x, y);
  return numeric_gradient([&](const Vector& v) { return theta_x(v, y); }, x);
}

Vector TwoPlayerGame::partial_y(const Vector& x, const Vector& y) const {
  if (grad_y) return (*grad_y)(x, y);
  return numeric_gradient([&](const Vector& v) { return theta_y(x, v); }, y);
}

double gradient_cross_check(const TwoPlayerGame& game, std::size_t points,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const Vector x = game.set_x.sample(rng);
    const Vector y = game.set_y.sample(rng);
    if (game.grad_x) {
      const Vector a = (*game.grad_x)(x, y);
      const Vector n =
          numeric_gradient([&](const Vector& v) { return game.theta_x(v, y); }, x);
      worst = std::max(worst, (a - n).norm() / std::max(1.0, a.norm()));
    }
    if (game.grad_y) {
      const Vector a = (*game.grad_y)(x, y);
      const Vector n =
          numeric_gradient([&](const Vector& v) { return game.theta_y(x, v); }, y);
      worst = std::max(worst, (a - n).norm() / std::max(1.0, a.norm()));
    }
  }
  return worst;
}

VIProblem game_to_vi(const TwoPlayerGame& game) {
  VIProblem p;
  p.name = "game:" + game.name;
  p.set = FeasibleSet::product({game.set_x, game.set_y});
  const auto nx = static_cast<Eigen::Index>(game.set_x.dimension());
  const auto ny = static_cast<Eigen::Index>(game.set_y.dimension());
  p.op = [game, nx, ny](const Vector& z) -> Vector {
    const Vector x = z.head(nx);
    const Vector y = z.tail(ny);
    return concat(game.partial_x(x, y), game.partial_y(x, y));
  };
  for (const auto& [x, y] : game.known_equilibria) {
    p.declared_solutions.push_back(concat(x, y));
  }
  p.spec = BuiltinOperator{p.name};
  return p;
}

EquilibriumReport classify_equilibrium(const TwoPlayerGame& game,
                                       const Vector& x, const Vector& y,
                                       std::size_t samples, std::uint64_t seed) {
  if (!game.set_x.contains(x, 1e-9) || !game.set_y.contains(y, 1e-9)) {
    throw InfeasiblePointError("classify_equilibrium: point is infeasible for '" +
                               game.name + "'");
  }
  const auto px = check_player(
      'x', game.set_x, [&](const Vector& v) { return game.theta_x(v, y); },
      [&](const Vector& v) { return game.partial_x(v, y); }, x, samples, seed);
  const auto py = check_player(
      'y', game.set_y, [&](const Vector& v) { return game.theta_y(x, v); },
      [&](const Vector& v) { return game.partial_y(x, v); }, y, samples,
      seed + 1);

  EquilibriumReport r;
  r.x = x;
  r.y = y;
  r.gap_x = px.gap;
  r.gap_y = py.gap;
  r.is_qne = combine(px.qne, py.qne);
  r.is_ne = combine(px.ne, py.ne);
  r.is_mne = combine(px.mne, py.mne);
  return r;
}

MintyOptimalityReport check_minty_optimality(const ScalarObjective& f,
                                             const Vector& candidate,
                                             std::size_t samples,
                                             std::uint64_t seed) {
  if (!f.set.contains(candidate, 1e-9)) {
    throw InfeasiblePointError("check_minty_optimality: candidate is infeasible");
  }
  const auto checks = check_player(
      'x', f.set, f.value, [&](const Vector& v) { return f.grad(v); }, candidate,
      samples, seed);
  return {checks.mne, checks.ne};
}

VIProblem objective_to_vi(const ScalarObjective& f) {
  VIProblem p;
  p.name = "objective:" + f.name;
  p.set = f.set;
  p.op = [f](const Vector& x) -> Vector { return f.grad(x); };
  p.spec = BuiltinOperator{p.name};
  return p;
}

const std::vector<TwoPlayerGame>& game_library() {
  static const std::vector<TwoPlayerGame> games = [] {
    std::vector<TwoPlayerGame> g;

    TwoPlayerGame saddle;
    saddle.name = "bilinear-saddle";
    saddle.theta_x = [](const Vector& x, const Vector& y) { return x[0] * y[0]; };
    saddle.theta_y = [](const Vector& x, const Vector& y) { return -x[0] * y[0]; };
    saddle.grad_x = [](const Vector&, const Vector& y) { return scalar(y[0]); };
    saddle.grad_y = [](const Vector& x, const Vector&) { return scalar(-x[0]); };
    saddle.block_multiconvex = true;
    saddle.known_equilibria = {{scalar(0.0), scalar(0.0)}};
    g.push_back(saddle);

    TwoPlayerGame decoupled;
    decoupled.name = "decoupled-convex";
    decoupled.theta_x = [](const Vector& x, const Vector&) { return x[0] * x[0]; };
    decoupled.theta_y = [](const Vector&, const Vector& y) { return y[0] * y[0]; };
    decoupled.grad_x = [](const Vector& x, const Vector&) { return scalar(2 * x[0]); };
    decoupled.grad_y = [](const Vector&, const Vector& y) { return scalar(2 * y[0]); };
    decoupled.block_multiconvex = true;
    decoupled.known_equilibria = {{scalar(0.0), scalar(0.0)}};
    g.push_back(decoupled);

    // One real player minimizing -x^2; the second player is a fixed point.
    TwoPlayerGame degenerate;
    degenerate.name = "neg-square-degenerate";
    degenerate.theta_x = [](const Vector& x, const Vector&) { return -x[0] * x[0]; };
    degenerate.theta_y = [](const Vector&, const Vector&) { return 0.0; };
    degenerate.grad_x = [](const Vector& x, const Vector&) { return scalar(-2 * x[0]); };
    degenerate.grad_y = [](const Vector&, const Vector&) { return scalar(0.0); };
    degenerate.set_y = FeasibleSet::interval(0.0, 0.0);
    degenerate.known_equilibria = {{scalar(1.0), scalar(0.0)},
                                   {scalar(-1.0), scalar(0.0)}};
    g.push_back(degenerate);

    TwoPlayerGame coordination;
    coordination.name = "coordination";
    coordination.theta_x = [](const Vector& x, const Vector& y) {
      return (x[0] - y[0]) * (x[0] - y[0]);
    };
    coordination.theta_y = [](const Vector& x, const Vector& y) {
      return (y[0] - x[0]) * (y[0] - x[0]);
    };
    coordination.grad_x = [](const Vector& x, const Vector& y) {
      return scalar(2 * (x[0] - y[0]));
    };
    coordination.grad_y = [](const Vector& x, const Vector& y) {
      return scalar(2 * (y[0] - x[0]));
    };
    coordination.block_multiconvex = true;
    coordination.known_equilibria = {{scalar(0.5), scalar(0.5)},
                                     {scalar(-0.25), scalar(-0.25)}};
    g.push_back(coordination);

    TwoPlayerGame pennies;
    pennies.name = "matching-pennies-simplex";
    Matrix a(2, 2);
    a << 1.0, -1.0, -1.0, 1.0;
    pennies.theta_x = [a](const Vector& x, const Vector& y) { return x.dot(a * y); };
    pennies.theta_y = [a](const Vector& x, const Vector& y) { return -x.dot(a * y); };
    pennies.grad_x = [a](const Vector&, const Vector& y) -> Vector { return a * y; };
    pennies.grad_y = [a](const Vector& x, const Vector&) -> Vector {
      return -(a.transpose() * x);
    };
    pennies.set_x = FeasibleSet::simplex(2);
    pennies.set_y = FeasibleSet::simplex(2);
    pennies.block_multiconvex = true;
    pennies.known_equilibria = {{Vector::Constant(2, 0.5), Vector::Constant(2, 0.5)}};
    g.push_back(pennies);

    // Concave in the x-player's own strategy: QNE that are not NE exist.
    // No analytic gradients, so the finite-difference path is exercised.
    TwoPlayerGame duel;
    duel.name = "nonconvex-duel";
    duel.theta_x = [](const Vector& x, const Vector& y) {
      return -x[0] * x[0] + x[0] * y[0];
    };
    duel.theta_y = [](const Vector& x, const Vector& y) {
      return y[0] * y[0] - x[0] * y[0];
    };
    g.push_back(duel);
    return g;
  }();
  return games;
}

const TwoPlayerGame& get_game(const std::string& name) {
  for (const auto& g : game_library()) {
    if (g.name == name) return g;
  }
  throw ConfigError("unknown game '" + name + "'");
}

const std::vector<ScalarObjective>& objective_library() {
  static const std::vector<ScalarObjective> objectives = [] {
    std::vector<ScalarObjective> o;

    ScalarObjective square;
    square.name = "square";
    square.value = [](const Vector& x) { return x[0] * x[0]; };
    square.gradient = [](const Vector& x) { return scalar(2 * x[0]); };
    square.convex = true;
    o.push_back(square);

    ScalarObjective neg;
    neg.name = "neg-square";
    neg.value = [](const Vector& x) { return -x[0] * x[0]; };
    neg.gradient = [](const Vector& x) { return scalar(-2 * x[0]); };
    o.push_back(neg);

    ScalarObjective well;
    well.name = "double-well";
    well.value = [](const Vector& x) {
      const double u = x[0] * x[0] - 0.25;
      return u * u;
    };
    well.gradient = [](const Vector& x) {
      return scalar(4 * x[0] * (x[0] * x[0] - 0.25));
    };
    o.push_back(well);

    ScalarObjective rosen;
    rosen.name = "rosenbrock-box";
    rosen.value = [](const Vector& x) {
      const double a = 1.0 - x[0];
      const double b = x[1] - x[0] * x[0];
      return a * a + 10.0 * b * b;
    };
    rosen.gradient = [](const Vector& x) {
      const double b = x[1] - x[0] * x[0];
      Vector g(2);
      g << -2.0 * (1.0 - x[0]) - 40.0 * x[0] * b, 20.0 * b;
      return g;
    };
    rosen.set = FeasibleSet::box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
    o.push_back(rosen);

    ScalarObjective tilted;
    tilted.name = "tilted-saddle";
    tilted.value = [](const Vector& x) {
      return x[0] * x[0] - 0.5 * x[1] * x[1] + 0.3 * x[1];
    };
    tilted.set = FeasibleSet::ball(Vector::Zero(2), 1.0);
    o.push_back(tilted);
    return o;
  }();
  return objectives;
}

const ScalarObjective& get_objective(const std::string& name) {
  for (const auto& f : objective_library()) {
    if (f.name == name) return f;
  }
  throw ConfigError("unknown objective '" + name + "'");
}

}  // namespace vilab

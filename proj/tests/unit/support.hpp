#pragma once

// Helpers and brute-force oracles shared by the unit suites. Nothing here
// calls into the library's own projection, gap or solver code.

#include "vilab/core.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <utility>
#include <vector>

namespace vilab::testing {

inline Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

inline VIProblem neg_identity() {
  Matrix q(1, 1);
  q << -1.0;
  auto p = make_affine_problem("neg-identity", FeasibleSet::interval(-1, 1), q, vec({0.0}));
  p.declared_solutions = {vec({-1.0}), vec({0.0}), vec({1.0})};
  return p;
}

inline VIProblem rotation() {
  Matrix q(2, 2);
  q << 0.0, 1.0, -1.0, 0.0;
  auto p = make_affine_problem("rotation", FeasibleSet::ball(Vector::Zero(2), 1.0), q,
                               Vector::Zero(2));
  p.declared_solutions = {Vector::Zero(2)};
  return p;
}

// Minimizes ||y - p||^2 over the probability simplex in R^3 on a grid of
// resolution h.
inline Vector grid_simplex_projection(const Vector& p, double h = 1e-3) {
  const int steps = static_cast<int>(std::lround(1.0 / h));
  double best = std::numeric_limits<double>::infinity();
  Vector arg(3);
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      const double a = i * h, b = j * h, c = 1.0 - a - b;
      const double d = (a - p[0]) * (a - p[0]) + (b - p[1]) * (b - p[1]) + (c - p[2]) * (c - p[2]);
      if (d < best) {
        best = d;
        arg << a, b, c;
      }
    }
  }
  return arg;
}

// max_y <g, x - y> over y in [lo, hi] on a uniform grid.
inline double grid_gap_1d(double fx, double x, double lo, double hi, int steps = 2000) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= steps; ++i) {
    const double y = lo + (hi - lo) * i / steps;
    best = std::max(best, fx * (x - y));
  }
  return best;
}

inline std::pair<double, double> project_unit_disk(double a, double b) {
  const double r = std::hypot(a, b);
  return r <= 1.0 ? std::pair{a, b} : std::pair{a / r, b / r};
}

// Extra-gradient on F(a, b) = (b, -a) over the unit disk, written out in
// scalars. Returns (min ||x_half - x||^2 over N steps, its k, x_half at k).
struct ScalarEgResult {
  double min_residual_sq = std::numeric_limits<double>::infinity();
  std::size_t k_min = 0;
  double half_a = 0.0, half_b = 0.0;
  double final_a = 0.0, final_b = 0.0;
};

inline ScalarEgResult scalar_rotation_eg(double a, double b, double t, std::size_t n) {
  ScalarEgResult r;
  for (std::size_t k = 0; k < n; ++k) {
    const auto [ha, hb] = project_unit_disk(a - t * b, b + t * a);
    const double res = (ha - a) * (ha - a) + (hb - b) * (hb - b);
    if (res < r.min_residual_sq) {
      r.min_residual_sq = res;
      r.k_min = k;
      r.half_a = ha;
      r.half_b = hb;
    }
    std::tie(a, b) = project_unit_disk(a - t * hb, b + t * ha);
  }
  r.final_a = a;
  r.final_b = b;
  return r;
}

// Gap of the rotation field at (a, b) over the unit disk: <F, x> + ||F||.
inline double rotation_gap(double a, double b) {
  const double fa = b, fb = -a;
  return fa * a + fb * b + std::hypot(fa, fb);
}

}  // namespace vilab::testing

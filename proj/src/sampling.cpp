#include "vilab/sampling.hpp"

#include <cmath>

namespace vilab {

std::size_t grid_points_per_axis(std::size_t count, std::size_t dimension) {
  const double root =
      std::pow(static_cast<double>(count), 1.0 / static_cast<double>(dimension));
  // Guard against pow() landing just below an exact integer root.
  auto m = static_cast<std::size_t>(std::floor(root + 1e-9));
  return std::max<std::size_t>(m, 2);
}

std::vector<Vector> random_points(const FeasibleSet& set, std::size_t count,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(set.sample(rng));
  return out;
}

std::vector<Vector> probe_points(const FeasibleSet& set, std::size_t count,
                                 std::uint64_t seed) {
  const std::size_t n = set.dimension();
  if (n > kGridMaxDimension) return random_points(set, count, seed);

  const std::size_t m = grid_points_per_axis(count, n);
  const auto bb = set.bounding_box();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;

  std::vector<Vector> out;
  out.reserve(total);
  std::vector<std::size_t> idx(n, 0);
  Vector p(static_cast<Eigen::Index>(n));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t i = 0; i < n; ++i) {
      idx[i] = rest % m;
      rest /= m;
      const auto e = static_cast<Eigen::Index>(i);
      const double frac = static_cast<double>(idx[i]) / static_cast<double>(m - 1);
      p[e] = bb.lower[e] + (bb.upper[e] - bb.lower[e]) * frac;
    }
    out.push_back(set.project(p));
  }
  return out;
}

}  // namespace vilab

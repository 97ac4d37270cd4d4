#pragma once

#include "vilab/core.hpp"

#include <cstdint>
#include <vector>

namespace vilab {

inline constexpr std::size_t kGridMaxDimension = 3;

/// Deterministic probe set of roughly `count` feasible points.
///
/// For dimension <= 3 this is a tensor grid over the bounding box with
/// floor(count^(1/n)) points per axis (at least 2), each point projected
/// onto the set; the grid always contains the box corners and, for an odd
/// per-axis count, the box center. Above dimension 3 it is `count` seeded
/// uniform samples. The seed is ignored on the grid path.
std::vector<Vector> probe_points(const FeasibleSet& set, std::size_t count,
                                 std::uint64_t seed);

/// `count` seeded uniform samples, regardless of dimension.
std::vector<Vector> random_points(const FeasibleSet& set, std::size_t count,
                                  std::uint64_t seed);

/// Per-axis grid size used by probe_points for a given dimension.
std::size_t grid_points_per_axis(std::size_t count, std::size_t dimension);

}  // namespace vilab

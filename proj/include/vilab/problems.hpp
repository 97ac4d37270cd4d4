#pragma once

#include "vilab/conditions.hpp"
#include "vilab/core.hpp"

#include <string>
#include <vector>

namespace vilab {

/// A condition verdict the registry pins for a problem, with everything
/// needed to reproduce it.
struct ExpectedCheck {
  ConditionKind condition = ConditionKind::MONOTONE;
  Verdict verdict = Verdict::SATISFIED_ON_SAMPLES;
  // Sequence conditions.
  double t = 0.5;
  double delta = 1.0;
  std::size_t length = 100;
  std::vector<Vector> starts;
  std::vector<Vector> candidates;  // empty: declared solutions
  // Pointwise conditions.
  std::size_t samples = 10000;
  std::uint64_t seed = 7;
  double mu = kDefaultMu;
};

struct ProblemRecord {
  VIProblem problem;
  std::vector<std::string> tags;
  std::vector<ExpectedCheck> expected;
  std::string notes;

  bool has_tag(const std::string& tag) const;
};

struct ProblemSummary {
  std::string name;
  std::size_t dimension = 0;
  std::vector<std::string> tags;
};

/// Throws UnknownProblemError listing the registry when `name` is missing.
const ProblemRecord& get_problem(const std::string& name);

/// Alphabetical.
std::vector<ProblemSummary> list_problems();

class UnknownProblemError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Seeded feasible start points; with `first_coordinate_nonneg` each sample
/// is reflected into {x_1 >= 0} (the set must be symmetric in x_1).
std::vector<Vector> seeded_starts(const FeasibleSet& set, std::size_t count,
                                  std::uint64_t seed,
                                  bool first_coordinate_nonneg = false);

}  // namespace vilab

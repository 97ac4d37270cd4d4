#pragma once

#include "vilab/conditions.hpp"
#include "vilab/core.hpp"
#include "vilab/problems.hpp"
#include "vilab/serialize.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace vilab {

enum class RateMetric { MIN_RESIDUAL_SQ, GAP_AT_KN };

std::string to_string(RateMetric metric);
RateMetric metric_from_string(const std::string& s);

struct RatePoint {
  std::size_t n = 0;
  double value = 0.0;
};

struct RateFit {
  RateMetric metric = RateMetric::MIN_RESIDUAL_SQ;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::pair<std::size_t, std::size_t> window{0, 0};
  // Every checkpoint value was exactly zero; slope/intercept are meaningless.
  bool exact_convergence = false;
  // Zero checkpoint values raised to DBL_MIN before taking logs.
  std::size_t floored_points = 0;
  std::vector<RatePoint> points;
};

inline constexpr std::size_t kMinCheckpoints = 10;

/// `count` log-spaced integers in [lo, hi], rounded and de-duplicated.
std::vector<std::size_t> default_checkpoints(std::size_t count = 12,
                                             std::size_t lo = 100,
                                             std::size_t hi = 10000);

/// Evaluates `metric` at each checkpoint prefix of an existing trajectory
/// and fits log(value) = intercept + slope log(N) by least squares.
RateFit fit_trajectory(const Trajectory& trajectory, const VIProblem& problem,
                       RateMetric metric,
                       const std::vector<std::size_t>& checkpoints);

/// Runs once to the last checkpoint, then fit_trajectory.
RateFit fit_rate(const VIProblem& problem, SolverKind solver,
                 SolverConfig config, const Vector& x0, RateMetric metric,
                 const std::vector<std::size_t>& checkpoints = default_checkpoints());

/// CSV with header `metric,N,value`.
void write_rate_csv(std::ostream& out, const std::vector<RateFit>& fits);
Json to_json(const RateFit& fit);

struct CheckRequest {
  ConditionKind condition = ConditionKind::MONOTONE;
  double t = 0.5;
  double delta = 1.0;
  std::size_t length = 100;
  std::size_t samples = 10000;
  std::uint64_t seed = 7;
};

struct ExperimentConfig {
  std::string problem;               // registry name
  std::optional<Json> inline_problem;  // takes precedence over `problem`
  SolverKind solver = SolverKind::EG;
  SolverConfig solver_config;
  std::optional<Vector> x0;  // otherwise a seeded feasible sample
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> out_dir;
  std::vector<CheckRequest> checks;
  bool include_timing = false;
};

struct ExperimentResult {
  RunSummary summary;
  Trajectory trajectory;
  std::vector<ConditionReport> reports;
};

VIProblem resolve_problem(const ExperimentConfig& config);

/// Writes trajectory.jsonl, summary.json and (with checks) conditions.json
/// into out_dir when set. final_gap is G at the test point of record k_N.
/// Solver failures propagate as SolverError.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Runs one pinned registry check.
ConditionReport run_expected_check(const VIProblem& problem,
                                   const ExpectedCheck& check);

struct SuiteEntry {
  ExpectedCheck expected;
  ConditionReport report;
  bool matches = false;
};

struct SuiteResult {
  std::string problem;
  std::vector<SuiteEntry> entries;
  std::size_t mismatches() const;
};

/// Every expected check of a registry problem, run concurrently.
SuiteResult check_suite(const std::string& problem_name);

}  // namespace vilab

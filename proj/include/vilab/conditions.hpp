#pragma once

#include "vilab/core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vilab {

enum class ConditionKind {
  MONOTONE,
  STRONGLY_MONOTONE,
  PSEUDO_MONOTONE,
  STRONG_PSEUDO,
  QUASI_MONOTONE,
  WEAK_SHARP,
  MINTY,
  STRONG_MINTY,
  LOCAL_MINTY,
  LOCAL_MINTY_PLUS,
  LOCAL_MINTY_STAR,
  GP,
  GP_PLUS,
  GP_STAR,
};

// SATISFIED_ON_SAMPLES is limited to what was sampled; VIOLATED carries a
// witness and is a certificate.
enum class Verdict { SATISFIED_ON_SAMPLES, VIOLATED };

std::string to_string(ConditionKind kind);
ConditionKind condition_from_string(const std::string& s);
std::string to_string(Verdict verdict);
Verdict verdict_from_string(const std::string& s);

bool is_sequence_condition(ConditionKind kind);
bool uses_extragradient_orbit(ConditionKind kind);

/// Values at or above -kConditionTol count as satisfied.
inline constexpr double kConditionTol = 1e-10;
inline constexpr double kDefaultMu = 1e-6;
inline constexpr double kCandidateGapTol = 1e-6;

struct Witness {
  Vector x;
  std::optional<Vector> y;       // second point of a pair condition
  std::optional<Vector> x_star;  // candidate solution
  double value = 0.0;
  std::optional<std::size_t> k;  // sequence index
};

struct ConditionParameters {
  double t = 0.0;
  double delta = 0.0;
  double mu = 0.0;
  std::size_t sample_count = 0;
  std::size_t sequence_length = 0;
  std::uint64_t seed = 0;
};

struct ConditionReport {
  ConditionKind condition = ConditionKind::MONOTONE;
  Verdict verdict = Verdict::SATISFIED_ON_SAMPLES;
  std::optional<Witness> witness;
  ConditionParameters parameters;
  // Sequence checks: the satisfying candidate per orbit (nullopt = none),
  // and the first candidate that works for every orbit, if any.
  std::vector<std::optional<std::size_t>> orbit_candidates;
  std::optional<std::size_t> uniform_candidate;

  bool satisfied() const { return verdict == Verdict::SATISFIED_ON_SAMPLES; }
};

/// Samples `samples` seeded feasible pairs and evaluates every pointwise
/// condition (MONOTONE .. STRONG_MINTY). Minty-type and weak-sharpness
/// checks use candidate_solutions() as x*.
std::vector<ConditionReport> classify_operator(const VIProblem& problem,
                                               std::size_t samples,
                                               std::uint64_t seed,
                                               double mu = kDefaultMu);

/// Declared solutions, plus (dimension <= 3) probe-grid points whose gap is
/// below kCandidateGapTol, de-duplicated.
std::vector<Vector> candidate_solutions(const VIProblem& problem,
                                        std::size_t grid_samples = 2001);

/// Checks one sequence condition along the orbit of x0 under M (or M+ for
/// LOCAL_MINTY_PLUS / GP_PLUS), `length` terms. A candidate satisfies when
/// every term has value >= -kConditionTol.
ConditionReport check_sequence_condition(const VIProblem& problem,
                                         ConditionKind condition,
                                         const Vector& x0, double t,
                                         double delta, std::size_t length,
                                         std::span<const Vector> candidates);

/// Runs check_sequence_condition from every start point and aggregates:
/// SATISFIED when every orbit has some satisfying candidate.
ConditionReport check_orbits(const VIProblem& problem, ConditionKind condition,
                             std::span<const Vector> starts, double t,
                             double delta, std::size_t length,
                             std::span<const Vector> candidates);

/// max(0, -min_x <F(x), x - candidate>) over probe_points(samples, seed).
double minty_residual(const VIProblem& problem, const Vector& candidate,
                      std::size_t samples, std::uint64_t seed);

/// Value of the defining inequality of a sequence condition at a single
/// point x for candidate x_star (no orbit).
double sequence_condition_value(const VIProblem& problem,
                                ConditionKind condition, const Vector& x,
                                const Vector& x_star, double t, double delta);

/// Recomputes a VIOLATED report's witness value from its stored points.
double reevaluate_witness(const VIProblem& problem,
                          const ConditionReport& report);

const ConditionReport& find_report(std::span<const ConditionReport> reports,
                                   ConditionKind kind);

}  // namespace vilab

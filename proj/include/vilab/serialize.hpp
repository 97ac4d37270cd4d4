#pragma once

#include "vilab/conditions.hpp"
#include "vilab/core.hpp"
#include "vilab/games.hpp"
#include "vilab/merit.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <string>

namespace vilab {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Vector vector_from_json(const Json& j);
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const FeasibleSet& set);
FeasibleSet set_from_json(const Json& j);

/// {name, set, operator, lipschitz, declared_solutions}. Builtin operators
/// are written by id.
Json problem_to_json(const VIProblem& problem);

/// Inverse of problem_to_json. A builtin id resolves against the problem
/// registry, then "game:<name>" and "objective:<name>"; the document's set,
/// lipschitz and declared_solutions still apply.
VIProblem problem_from_json(const Json& j);

Json to_json(const MeritReport& report);
Json to_json(const ConditionReport& report);
Json to_json(const EquilibriumReport& report);
Json to_json(const IterateRecord& record);

struct RunSummary {
  std::size_t k_N = 0;
  double min_residual_sq = 0.0;
  double final_gap = 0.0;
  std::size_t iterations = 0;
  double wall_time_ms = 0.0;
};

Json to_json(const RunSummary& summary, bool include_timing);

/// One JSON object per iterate record, newline terminated.
void write_trajectory_jsonl(std::ostream& out, const Trajectory& trajectory);

/// Doubles are written with round-trip precision.
std::string dump(const Json& j, int indent = 2);

}  // namespace vilab

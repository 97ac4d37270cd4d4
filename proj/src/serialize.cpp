#include "vilab/serialize.hpp"

#include "vilab/problems.hpp"

#include <type_traits>

namespace vilab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json optional_vector(const std::optional<Vector>& v) {
  return v ? to_json(*v) : Json(nullptr);
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("problem JSON: missing field '") + key + "'");
  }
  return j.at(key);
}

VIProblem resolve_builtin(const std::string& id) {
  const std::string game_prefix = "game:";
  const std::string objective_prefix = "objective:";
  if (id.rfind(game_prefix, 0) == 0) {
    return game_to_vi(get_game(id.substr(game_prefix.size())));
  }
  if (id.rfind(objective_prefix, 0) == 0) {
    return objective_to_vi(get_objective(id.substr(objective_prefix.size())));
  }
  return get_problem(id).problem;
}

}  // namespace

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const Json& j) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array()) throw ConfigError("expected a numeric array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError("expected a numeric array");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a non-empty matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Vector first = vector_from_json(j[0]);
  Matrix m(rows, first.size());
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = vector_from_json(j[static_cast<std::size_t>(r)]);
    if (row.size() != first.size()) throw DimensionError("ragged matrix rows");
    m.row(r) = row.transpose();
  }
  return m;
}

Json to_json(const FeasibleSet& set) {
  return std::visit(
      overloaded{
          [](const BoxSet& b) {
            return Json{{"variant", "box"},
                        {"params", {{"lower", to_json(b.lower)}, {"upper", to_json(b.upper)}}}};
          },
          [](const BallSet& b) {
            return Json{{"variant", "ball"},
                        {"params", {{"center", to_json(b.center)}, {"radius", b.radius}}}};
          },
          [](const SimplexSet& s) {
            return Json{{"variant", "simplex"}, {"params", {{"dimension", s.dimension}}}};
          },
          [](const ProductSet& p) {
            Json parts = Json::array();
            for (const auto& part : p.parts) parts.push_back(to_json(part));
            return Json{{"variant", "product"}, {"params", {{"parts", parts}}}};
          },
      },
      set.variant());
}

FeasibleSet set_from_json(const Json& j) {
  const std::string variant = require(j, "variant").get<std::string>();
  const Json& params = require(j, "params");
  if (variant == "box") {
    return FeasibleSet::box(vector_from_json(require(params, "lower")),
                            vector_from_json(require(params, "upper")));
  }
  if (variant == "ball") {
    return FeasibleSet::ball(vector_from_json(require(params, "center")),
                             require(params, "radius").get<double>());
  }
  if (variant == "simplex") {
    return FeasibleSet::simplex(require(params, "dimension").get<std::size_t>());
  }
  if (variant == "product") {
    std::vector<FeasibleSet> parts;
    for (const auto& part : require(params, "parts")) parts.push_back(set_from_json(part));
    return FeasibleSet::product(std::move(parts));
  }
  throw ConfigError("unknown set variant '" + variant + "'");
}

Json problem_to_json(const VIProblem& problem) {
  Json op = std::visit(
      overloaded{
          [](const AffineOperator& a) {
            return Json{{"kind", "affine"},
                        {"matrix", to_json(a.matrix)},
                        {"offset", to_json(a.offset)}};
          },
          [&](const BuiltinOperator& b) {
            return Json{{"kind", "builtin"},
                        {"id", b.id.empty() ? problem.name : b.id}};
          },
      },
      problem.spec);
  Json solutions = Json::array();
  for (const auto& s : problem.declared_solutions) solutions.push_back(to_json(s));
  Json out{{"name", problem.name},
           {"set", to_json(problem.set)},
           {"operator", op},
           {"lipschitz", problem.lipschitz ? Json(*problem.lipschitz) : Json(nullptr)},
           {"declared_solutions", solutions}};
  if (problem.lipschitz_p) out["lipschitz_p"] = *problem.lipschitz_p;
  return out;
}

VIProblem problem_from_json(const Json& j) {
  const std::string name = require(j, "name").get<std::string>();
  FeasibleSet set = set_from_json(require(j, "set"));
  const Json& op = require(j, "operator");
  const std::string kind = require(op, "kind").get<std::string>();

  VIProblem p;
  if (kind == "affine") {
    p = make_affine_problem(name, set, matrix_from_json(require(op, "matrix")),
                            vector_from_json(require(op, "offset")));
  } else if (kind == "builtin") {
    p = resolve_builtin(require(op, "id").get<std::string>());
    p.name = name;
    p.set = set;
  } else {
    throw ConfigError("unknown operator kind '" + kind + "'");
  }

  if (j.contains("lipschitz")) {
    const Json& l = j.at("lipschitz");
    if (l.is_null()) {
      if (kind != "affine") p.lipschitz.reset();
    } else {
      p.lipschitz = l.get<double>();
    }
  }
  if (j.contains("lipschitz_p") && !j.at("lipschitz_p").is_null()) {
    p.lipschitz_p = j.at("lipschitz_p").get<double>();
  }
  p.declared_solutions.clear();
  if (j.contains("declared_solutions")) {
    for (const auto& s : j.at("declared_solutions")) {
      p.declared_solutions.push_back(vector_from_json(s));
    }
  }
  validate_problem(p);
  return p;
}

Json to_json(const MeritReport& r) {
  return Json{{"gap", r.gap},
              {"dual_gap_estimate", r.dual_gap_estimate},
              {"sample_count", r.sample_count},
              {"proj_residual", r.proj_residual},
              {"step", r.step},
              {"epsilon", r.epsilon},
              {"epsilon_vi", r.epsilon_vi},
              {"epsilon_minty", r.epsilon_minty}};
}

Json to_json(const ConditionReport& r) {
  Json out{{"condition", to_string(r.condition)}, {"verdict", to_string(r.verdict)}};
  if (r.witness) {
    const auto& w = *r.witness;
    Json wj{{"x", to_json(w.x)}, {"value", w.value}};
    if (w.y) wj["y"] = to_json(*w.y);
    if (w.x_star) wj["x_star"] = to_json(*w.x_star);
    if (w.k) wj["k"] = *w.k;
    out["witness"] = wj;
  } else {
    out["witness"] = nullptr;
  }
  const auto& p = r.parameters;
  out["parameters"] = Json{{"t", p.t},
                           {"delta", p.delta},
                           {"mu", p.mu},
                           {"sample_count", p.sample_count},
                           {"sequence_length", p.sequence_length},
                           {"seed", p.seed}};
  if (!r.orbit_candidates.empty()) {
    Json oc = Json::array();
    for (const auto& c : r.orbit_candidates) oc.push_back(c ? Json(*c) : Json(nullptr));
    out["orbit_candidates"] = oc;
    out["uniform_candidate"] = r.uniform_candidate ? Json(*r.uniform_candidate) : Json(nullptr);
  }
  return out;
}

namespace {
Json verdict_json(const EquilibriumVerdict& v) {
  Json out{{"verdict", to_string(v.verdict)}};
  if (v.witness) {
    out["witness"] = Json{{"player", std::string(1, v.witness->player)},
                          {"point", to_json(v.witness->point)},
                          {"value", v.witness->value}};
  } else {
    out["witness"] = nullptr;
  }
  return out;
}
}  // namespace

Json to_json(const EquilibriumReport& r) {
  return Json{{"x", to_json(r.x)},
              {"y", to_json(r.y)},
              {"gap_x", r.gap_x},
              {"gap_y", r.gap_y},
              {"qne", verdict_json(r.is_qne)},
              {"ne", verdict_json(r.is_ne)},
              {"mne", verdict_json(r.is_mne)}};
}

Json to_json(const IterateRecord& rec) {
  Json out{{"k", rec.k}, {"x", to_json(rec.x)}, {"x_half", optional_vector(rec.x_half)},
           {"residual_sq", rec.residual_sq}};
  out["gap"] = rec.gap ? Json(*rec.gap) : Json(nullptr);
  if (rec.gamma) out["gamma"] = *rec.gamma;
  if (rec.inner_iters > 0) out["inner_iters"] = rec.inner_iters;
  return out;
}

Json to_json(const RunSummary& s, bool include_timing) {
  Json out{{"k_N", s.k_N},
           {"min_residual_sq", s.min_residual_sq},
           {"final_gap", s.final_gap},
           {"iterations", s.iterations}};
  if (include_timing) out["wall_time_ms"] = s.wall_time_ms;
  return out;
}

void write_trajectory_jsonl(std::ostream& out, const Trajectory& trajectory) {
  for (const auto& rec : trajectory.iterates) out << to_json(rec).dump() << '\n';
}

std::string dump(const Json& j, int indent) { return j.dump(indent); }

}  // namespace vilab

#include "vilab/problems.hpp"

#include "vilab/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace vilab {

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = static_cast<Eigen::Index>(rows.begin()->size());
  Matrix out(n, m);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index j = 0;
    for (double x : row) out(i, j++) = x;
    ++i;
  }
  return out;
}

ExpectedCheck pointwise(ConditionKind kind, Verdict verdict) {
  ExpectedCheck c;
  c.condition = kind;
  c.verdict = verdict;
  return c;
}

ExpectedCheck sequence(ConditionKind kind, Verdict verdict, double t,
                       std::vector<Vector> starts,
                       std::vector<Vector> candidates = {}) {
  ExpectedCheck c;
  c.condition = kind;
  c.verdict = verdict;
  c.t = t;
  c.starts = std::move(starts);
  c.candidates = std::move(candidates);
  return c;
}

constexpr auto SAT = Verdict::SATISFIED_ON_SAMPLES;
constexpr auto VIOL = Verdict::VIOLATED;

constexpr ConditionKind kSequenceFamily[] = {
    ConditionKind::LOCAL_MINTY, ConditionKind::LOCAL_MINTY_PLUS,
    ConditionKind::LOCAL_MINTY_STAR, ConditionKind::GP,
    ConditionKind::GP_PLUS, ConditionKind::GP_STAR};

ProblemRecord neg_identity() {
  ProblemRecord r;
  r.problem = make_affine_problem("neg-identity-1d", FeasibleSet::interval(-1, 1),
                                  mat({{-1.0}}), vec({0.0}));
  r.problem.lipschitz_p = 1.0;
  r.problem.declared_solutions = {vec({-1.0}), vec({0.0}), vec({1.0})};
  r.tags = {"affine", "no-minty-solution", "non-monotone"};
  r.notes = "X = [-1, 1], F(x) = -x. Sol = {-1, 0, 1}, no Minty solution; "
            "GP-type and local Minty conditions hold with x* = sign(x0).";

  auto starts = seeded_starts(r.problem.set, 32, 101);
  starts.push_back(vec({0.0}));
  for (auto kind : kSequenceFamily) {
    r.expected.push_back(sequence(kind, SAT, 0.5, starts));
  }
  r.expected.push_back(pointwise(ConditionKind::MONOTONE, VIOL));
  r.expected.push_back(pointwise(ConditionKind::QUASI_MONOTONE, VIOL));
  r.expected.push_back(pointwise(ConditionKind::MINTY, VIOL));
  return r;
}

ProblemRecord indef_diag_ball() {
  ProblemRecord r;
  r.problem = make_affine_problem("indef-diag-ball",
                                  FeasibleSet::ball(Vector::Zero(2), 1.0),
                                  mat({{-1.0, 0.0}, {0.0, 1.0}}), vec({0.0, 0.0}));
  r.problem.lipschitz_p = 1.0;
  r.problem.declared_solutions = {vec({1.0, 0.0}), vec({0.0, 0.0}),
                                  vec({-1.0, 0.0})};
  r.tags = {"affine", "no-minty-solution", "non-monotone"};
  r.notes = "Unit ball, F(x) = diag(-1, 1) x. Sol = {(1,0), (0,0), (-1,0)}, "
            "no Minty solution; local Minty family holds for t in (0, 1] with "
            "x* = (1,0) on x1 >= 0 and the mirrored candidate on x1 <= 0.";

  const auto right = seeded_starts(r.problem.set, 32, 202, true);
  std::vector<Vector> left;
  for (const auto& s : right) left.push_back(vec({-s[0], s[1]}));
  for (auto kind : kSequenceFamily) {
    r.expected.push_back(sequence(kind, SAT, 0.5, right, {vec({1.0, 0.0})}));
    r.expected.push_back(sequence(kind, SAT, 0.5, left, {vec({-1.0, 0.0})}));
  }
  r.expected.push_back(pointwise(ConditionKind::MONOTONE, VIOL));
  r.expected.push_back(pointwise(ConditionKind::QUASI_MONOTONE, VIOL));
  r.expected.push_back(pointwise(ConditionKind::MINTY, VIOL));
  return r;
}

ProblemRecord rotation_ball() {
  ProblemRecord r;
  r.problem = make_affine_problem("rotation-ball",
                                  FeasibleSet::ball(Vector::Zero(2), 1.0),
                                  mat({{0.0, 1.0}, {-1.0, 0.0}}), vec({0.0, 0.0}));
  r.problem.lipschitz_p = 1.0;
  r.problem.declared_solutions = {vec({0.0, 0.0})};
  r.tags = {"affine", "monotone", "saddle"};
  r.notes = "Unit ball, F(x) = [[0,1],[-1,0]] x from min-max xy. Monotone with "
            "Sol = {(0,0)}, yet GP* fails near the origin.";

  const std::vector<Vector> near_origin = {vec({0.01, 0.0})};
  r.expected.push_back(sequence(ConditionKind::GP_STAR, VIOL, 0.5, near_origin));
  const auto starts = seeded_starts(r.problem.set, 32, 303);
  r.expected.push_back(sequence(ConditionKind::LOCAL_MINTY, SAT, 0.5, starts));
  r.expected.push_back(sequence(ConditionKind::LOCAL_MINTY_PLUS, SAT, 0.5, starts));
  r.expected.push_back(sequence(ConditionKind::GP, SAT, 0.5, starts));
  r.expected.push_back(sequence(ConditionKind::GP_PLUS, SAT, 0.5, starts));
  r.expected.push_back(pointwise(ConditionKind::MONOTONE, SAT));
  r.expected.push_back(pointwise(ConditionKind::PSEUDO_MONOTONE, SAT));
  r.expected.push_back(pointwise(ConditionKind::MINTY, SAT));
  r.expected.push_back(pointwise(ConditionKind::STRONGLY_MONOTONE, VIOL));
  return r;
}

ProblemRecord neg_square_opt() {
  ProblemRecord r;
  r.problem = make_affine_problem("neg-square-opt", FeasibleSet::interval(-1, 1),
                                  mat({{-2.0}}), vec({0.0}));
  r.problem.lipschitz_p = 1.0;
  r.problem.declared_solutions = {vec({-1.0}), vec({0.0}), vec({1.0})};
  r.tags = {"affine", "no-minty-solution", "non-monotone", "optimization"};
  r.notes = "VI(grad f) for min -x^2 on [-1, 1]: stationary set {-1, 0, 1}, "
            "global minimizers {-1, 1}, neither a Minty solution.";
  r.expected.push_back(pointwise(ConditionKind::MONOTONE, VIOL));
  r.expected.push_back(pointwise(ConditionKind::MINTY, VIOL));
  return r;
}

ProblemRecord bilinear_saddle_box() {
  // min_x max_y (x - x*)' A (y - y*) on [-1,1]^2 x [-1,1]^2.
  const Matrix a = mat({{2.0, 1.0}, {-1.0, 1.0}});
  const Vector x_star = vec({0.5, 0.25});
  const Vector y_star = vec({0.25, -0.5});
  Matrix m = Matrix::Zero(4, 4);
  m.block(0, 2, 2, 2) = a;
  m.block(2, 0, 2, 2) = -a.transpose();
  Vector q(4);
  q << -(a * y_star), a.transpose() * x_star;
  const auto square = FeasibleSet::box(Vector::Constant(2, -1.0),
                                       Vector::Constant(2, 1.0));

  ProblemRecord r;
  r.problem = make_affine_problem("bilinear-saddle-box",
                                  FeasibleSet::product({square, square}), m, q);
  r.problem.lipschitz_p = 1.0;
  Vector z(4);
  z << x_star, y_star;
  r.problem.declared_solutions = {z};
  r.tags = {"affine", "monotone", "saddle"};
  r.notes = "Bilinear saddle point on a product of boxes; monotone (skew) "
            "affine operator with interior solution.";
  r.expected.push_back(pointwise(ConditionKind::MONOTONE, SAT));
  r.expected.push_back(pointwise(ConditionKind::MINTY, SAT));
  const auto starts = seeded_starts(r.problem.set, 32, 505);
  r.expected.push_back(sequence(ConditionKind::LOCAL_MINTY, SAT, 0.25, starts));
  r.expected.push_back(sequence(ConditionKind::GP_PLUS, SAT, 0.25, starts));
  return r;
}

ProblemRecord strongly_monotone_affine() {
  const Matrix skew = mat({{0.0, 1.0, -0.5}, {-1.0, 0.0, 2.0}, {0.5, -2.0, 0.0}});
  const Matrix a = Matrix::Identity(3, 3) + skew;
  const Vector x_star = vec({0.25, -0.5, 0.125});
  const Vector b = -(a * x_star);

  ProblemRecord r;
  r.problem = make_affine_problem(
      "strongly-monotone-affine",
      FeasibleSet::box(Vector::Constant(3, -1.0), Vector::Constant(3, 1.0)), a, b);
  r.problem.lipschitz_p = 1.0;
  r.problem.declared_solutions = {x_star};
  r.tags = {"affine", "monotone", "strongly-monotone"};
  r.notes = "F(x) = (I + S) x + b with S skew on [-1,1]^3; strongly monotone "
            "with modulus 1.";
  r.expected.push_back(pointwise(ConditionKind::MONOTONE, SAT));
  r.expected.push_back(pointwise(ConditionKind::STRONGLY_MONOTONE, SAT));
  r.expected.push_back(pointwise(ConditionKind::STRONG_MINTY, SAT));
  const auto starts = seeded_starts(r.problem.set, 32, 606);
  r.expected.push_back(sequence(ConditionKind::LOCAL_MINTY, SAT, 0.2, starts));
  return r;
}

ProblemRecord cubic_monotone_box() {
  ProblemRecord r;
  auto& p = r.problem;
  p.name = "cubic-monotone-box";
  p.set = FeasibleSet::box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  p.op = [](const Vector& x) -> Vector {
    return vec({x[0] * x[0] * x[0] + x[1], x[1] * x[1] * x[1] - x[0]});
  };
  p.jacobian = [](const Vector& x) -> Matrix {
    return mat({{3.0 * x[0] * x[0], 1.0}, {-1.0, 3.0 * x[1] * x[1]}});
  };
  // ||J|| <= ||diag(3x_i^2)|| + ||skew|| <= 4; ||J(x)-J(y)|| <= 6 ||x-y||.
  p.lipschitz = 4.0;
  p.lipschitz_p = 6.0;
  p.declared_solutions = {vec({0.0, 0.0})};
  p.spec = BuiltinOperator{"cubic-monotone-box"};
  r.tags = {"monotone", "nonlinear"};
  r.notes = "F(x) = (x1^3 + x2, x2^3 - x1) on [-1,1]^2; monotone, nonlinear, "
            "unique solution at the origin.";
  r.expected.push_back(pointwise(ConditionKind::MONOTONE, SAT));
  r.expected.push_back(pointwise(ConditionKind::MINTY, SAT));
  return r;
}

ProblemRecord rps_simplex() {
  const Matrix a = mat({{0.0, -1.0, 1.0}, {1.0, 0.0, -1.0}, {-1.0, 1.0, 0.0}});
  Matrix m = Matrix::Zero(6, 6);
  m.block(0, 3, 3, 3) = a;
  m.block(3, 0, 3, 3) = -a.transpose();
  const auto simplex = FeasibleSet::simplex(3);

  ProblemRecord r;
  r.problem = make_affine_problem("rps-simplex",
                                  FeasibleSet::product({simplex, simplex}), m,
                                  Vector::Zero(6));
  r.problem.lipschitz_p = 1.0;
  r.problem.declared_solutions = {Vector::Constant(6, 1.0 / 3.0)};
  r.tags = {"affine", "game", "monotone", "simplex"};
  r.notes = "Rock-paper-scissors as a VI over two probability simplices; "
            "unique uniform equilibrium.";
  r.expected.push_back(pointwise(ConditionKind::MONOTONE, SAT));
  r.expected.push_back(pointwise(ConditionKind::MINTY, SAT));
  return r;
}

const std::map<std::string, ProblemRecord>& registry() {
  static const std::map<std::string, ProblemRecord> reg = [] {
    std::map<std::string, ProblemRecord> m;
    for (auto make : {neg_identity, indef_diag_ball, rotation_ball,
                      neg_square_opt, bilinear_saddle_box,
                      strongly_monotone_affine, cubic_monotone_box,
                      rps_simplex}) {
      ProblemRecord rec = make();
      validate_problem(rec.problem);
      std::sort(rec.tags.begin(), rec.tags.end());
      m.emplace(rec.problem.name, std::move(rec));
    }
    return m;
  }();
  return reg;
}

}  // namespace

bool ProblemRecord::has_tag(const std::string& tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

const ProblemRecord& get_problem(const std::string& name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    std::string known;
    for (const auto& [k, _] : reg) known += (known.empty() ? "" : ", ") + k;
    throw UnknownProblemError("unknown problem '" + name + "'; registered: " + known);
  }
  return it->second;
}

std::vector<ProblemSummary> list_problems() {
  std::vector<ProblemSummary> out;
  for (const auto& [name, rec] : registry()) {
    out.push_back({name, rec.problem.dimension(), rec.tags});
  }
  return out;
}

std::vector<Vector> seeded_starts(const FeasibleSet& set, std::size_t count,
                                  std::uint64_t seed,
                                  bool first_coordinate_nonneg) {
  auto points = random_points(set, count, seed);
  if (first_coordinate_nonneg) {
    for (auto& p : points) p[0] = std::abs(p[0]);
  }
  return points;
}

}  // namespace vilab

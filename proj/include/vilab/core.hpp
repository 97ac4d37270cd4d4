#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace vilab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error hierarchy. Everything thrown by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InfeasiblePointError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

struct LinearMinimum {
  Vector point;
  double value = 0.0;
};

struct BoundingBox {
  Vector lower;
  Vector upper;
};

class FeasibleSet;

struct BoxSet {
  Vector lower;
  Vector upper;
};

struct BallSet {
  Vector center;
  double radius = 1.0;
};

struct SimplexSet {
  std::size_t dimension = 1;
};

struct ProductSet {
  std::vector<FeasibleSet> parts;
};

/// Non-empty convex compact subset of R^n with exact projection and
/// linear-minimization oracles. Immutable after construction.
class FeasibleSet {
 public:
  using Variant = std::variant<BoxSet, BallSet, SimplexSet, ProductSet>;

  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet interval(double lower, double upper);
  static FeasibleSet ball(Vector center, double radius);
  static FeasibleSet simplex(std::size_t dimension);
  static FeasibleSet product(std::vector<FeasibleSet> parts);

  const Variant& variant() const { return variant_; }
  std::string kind() const;

  std::size_t dimension() const { return dimension_; }
  double diameter() const { return diameter_; }

  /// Euclidean projection. Throws DimensionError / NumericError.
  Vector project(const Vector& point) const;

  /// argmin and min of <direction, y> over the set. Zero direction
  /// coordinates resolve to the lower bound (box) or first vertex (simplex).
  LinearMinimum linear_minimize(const Vector& direction) const;

  /// ||project(point) - point||.
  double distance(const Vector& point) const;
  bool contains(const Vector& point, double tol) const;

  BoundingBox bounding_box() const;
  Vector center() const;

  /// Uniform sample from the set.
  Vector sample(std::mt19937_64& rng) const;

 private:
  explicit FeasibleSet(Variant v);

  Variant variant_;
  std::size_t dimension_ = 0;
  double diameter_ = 0.0;
};

using OperatorFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

// How an operator can be written back out. Affine operators round-trip in
// full; anything else is referenced by registry id.
struct AffineOperator {
  Matrix matrix;
  Vector offset;
};

struct BuiltinOperator {
  std::string id;
};

using OperatorSpec = std::variant<AffineOperator, BuiltinOperator>;

/// VI(F; X): find x* in X with <F(x*), x - x*> >= 0 for all x in X.
struct VIProblem {
  std::string name;
  OperatorFn op;
  std::optional<JacobianFn> jacobian;
  FeasibleSet set = FeasibleSet::interval(0.0, 1.0);
  std::optional<double> lipschitz;    // of F
  std::optional<double> lipschitz_p;  // of the Jacobian (ARE p = 2)
  std::vector<Vector> declared_solutions;
  OperatorSpec spec = BuiltinOperator{};

  std::size_t dimension() const { return set.dimension(); }

  /// F(x) with dimension and finiteness checks.
  Vector evaluate(const Vector& x) const;
  Matrix evaluate_jacobian(const Vector& x) const;
};

VIProblem make_affine_problem(std::string name, FeasibleSet set, Matrix matrix,
                              Vector offset);

/// Checks that the operator dimension matches the set and that every
/// declared solution is feasible. Throws on failure.
void validate_problem(const VIProblem& problem);

enum class SolverKind { GP, EG, ARE };

std::string to_string(SolverKind kind);
SolverKind solver_from_string(const std::string& s);

struct IterateRecord {
  std::size_t k = 0;
  Vector x;
  std::optional<Vector> x_half;
  double residual_sq = 0.0;
  std::optional<double> gap;
  std::optional<double> gamma;  // ARE regularization weight
  std::size_t inner_iters = 0;
};

struct Trajectory {
  std::string problem_name;
  SolverKind solver = SolverKind::GP;
  double step = 0.0;
  int order = 1;
  double tau = 0.0;  // approximation quality in effect (ARE)
  std::vector<IterateRecord> iterates;
  Vector final_x;  // x^N, the iterate after the last record
  std::size_t k_min = 0;
  std::vector<std::string> warnings;

  /// x^{k+1} for record k.
  const Vector& next_iterate(std::size_t k) const;
  /// The point whose gap is tracked: x^k for GP, x^{k+0.5} otherwise.
  const Vector& test_point(std::size_t k) const;
  /// Smallest-index argmin of residual_sq over records [0, count).
  std::size_t argmin_residual(std::size_t count) const;
  double min_residual_sq() const;
};

struct SolverConfig {
  double step = 0.5;
  std::size_t max_iters = 100;
  int order = 1;
  double tau = 0.5;
  double delta = 1.0;
  double inner_tol = 1e-10;
  std::size_t inner_max_iters = 200000;
  std::size_t record_gap_every = 0;
};

void validate_config(const SolverConfig& config);

}  // namespace vilab

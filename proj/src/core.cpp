#include "vilab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace vilab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dimension(const Vector& v, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(v.size()) != n) {
    std::ostringstream os;
    os << what << ": expected dimension " << n << ", got " << v.size();
    throw DimensionError(os.str());
  }
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw NumericError(std::string(what) + ": non-finite coordinate");
  }
}

Vector project_simplex(const Vector& z) {
  const auto n = z.size();
  std::vector<double> sorted(z.data(), z.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumsum += sorted[i];
    const double candidate = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (sorted[i] - candidate > 0.0) theta = candidate;
  }
  return (z.array() - theta).max(0.0).matrix();
}

}  // namespace

FeasibleSet::FeasibleSet(Variant v) : variant_(std::move(v)) {
  std::visit(
      Overloaded{
          [this](const BoxSet& b) {
            dimension_ = static_cast<std::size_t>(b.lower.size());
            diameter_ = (b.upper - b.lower).norm();
          },
          [this](const BallSet& b) {
            dimension_ = static_cast<std::size_t>(b.center.size());
            diameter_ = 2.0 * b.radius;
          },
          [this](const SimplexSet& s) {
            dimension_ = s.dimension;
            diameter_ = s.dimension == 1 ? 0.0 : std::sqrt(2.0);
          },
          [this](const ProductSet& p) {
            double sq = 0.0;
            for (const auto& part : p.parts) {
              dimension_ += part.dimension();
              sq += part.diameter() * part.diameter();
            }
            diameter_ = std::sqrt(sq);
          },
      },
      variant_);
}

FeasibleSet FeasibleSet::box(Vector lower, Vector upper) {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    throw DimensionError("box: bounds must be non-empty and of equal size");
  }
  require_finite(lower, "box lower bound");
  require_finite(upper, "box upper bound");
  if ((lower.array() > upper.array()).any()) {
    throw ConfigError("box: lower bound exceeds upper bound");
  }
  return FeasibleSet(BoxSet{std::move(lower), std::move(upper)});
}

FeasibleSet FeasibleSet::interval(double lower, double upper) {
  return box(Vector::Constant(1, lower), Vector::Constant(1, upper));
}

FeasibleSet FeasibleSet::ball(Vector center, double radius) {
  if (center.size() == 0) throw DimensionError("ball: empty center");
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ConfigError("ball: radius must be positive and finite");
  }
  return FeasibleSet(BallSet{std::move(center), radius});
}

FeasibleSet FeasibleSet::simplex(std::size_t dimension) {
  if (dimension == 0) throw DimensionError("simplex: dimension must be positive");
  return FeasibleSet(SimplexSet{dimension});
}

FeasibleSet FeasibleSet::product(std::vector<FeasibleSet> parts) {
  if (parts.empty()) throw DimensionError("product: no components");
  return FeasibleSet(ProductSet{std::move(parts)});
}

std::string FeasibleSet::kind() const {
  return std::visit(Overloaded{[](const BoxSet&) { return "box"; },
                               [](const BallSet&) { return "ball"; },
                               [](const SimplexSet&) { return "simplex"; },
                               [](const ProductSet&) { return "product"; }},
                    variant_);
}

Vector FeasibleSet::project(const Vector& point) const {
  require_dimension(point, dimension_, "project");
  require_finite(point, "project");
  return std::visit(
      Overloaded{
          [&](const BoxSet& b) -> Vector {
            return point.cwiseMax(b.lower).cwiseMin(b.upper);
          },
          [&](const BallSet& b) -> Vector {
            const Vector d = point - b.center;
            const double r = d.norm();
            if (r <= b.radius) return point;
            return b.center + d * (b.radius / r);
          },
          [&](const SimplexSet&) -> Vector { return project_simplex(point); },
          [&](const ProductSet& p) -> Vector {
            Vector out(point.size());
            Eigen::Index offset = 0;
            for (const auto& part : p.parts) {
              const auto m = static_cast<Eigen::Index>(part.dimension());
              out.segment(offset, m) = part.project(point.segment(offset, m));
              offset += m;
            }
            return out;
          },
      },
      variant_);
}

LinearMinimum FeasibleSet::linear_minimize(const Vector& direction) const {
  require_dimension(direction, dimension_, "linear_minimize");
  require_finite(direction, "linear_minimize");
  return std::visit(
      Overloaded{
          [&](const BoxSet& b) -> LinearMinimum {
            Vector y(direction.size());
            for (Eigen::Index i = 0; i < direction.size(); ++i) {
              y[i] = direction[i] < 0.0 ? b.upper[i] : b.lower[i];
            }
            return {y, direction.dot(y)};
          },
          [&](const BallSet& b) -> LinearMinimum {
            const double norm = direction.norm();
            if (norm == 0.0) return {b.center, 0.0};
            Vector y = b.center - direction * (b.radius / norm);
            return {y, direction.dot(b.center) - b.radius * norm};
          },
          [&](const SimplexSet&) -> LinearMinimum {
            Eigen::Index best = 0;
            for (Eigen::Index i = 1; i < direction.size(); ++i) {
              if (direction[i] < direction[best]) best = i;
            }
            Vector y = Vector::Zero(direction.size());
            y[best] = 1.0;
            return {y, direction[best]};
          },
          [&](const ProductSet& p) -> LinearMinimum {
            LinearMinimum out{Vector(direction.size()), 0.0};
            Eigen::Index offset = 0;
            for (const auto& part : p.parts) {
              const auto m = static_cast<Eigen::Index>(part.dimension());
              auto sub = part.linear_minimize(direction.segment(offset, m));
              out.point.segment(offset, m) = sub.point;
              out.value += sub.value;
              offset += m;
            }
            return out;
          },
      },
      variant_);
}

double FeasibleSet::distance(const Vector& point) const {
  return (project(point) - point).norm();
}

bool FeasibleSet::contains(const Vector& point, double tol) const {
  if (static_cast<std::size_t>(point.size()) != dimension_) return false;
  if (!point.allFinite()) return false;
  return distance(point) <= tol;
}

BoundingBox FeasibleSet::bounding_box() const {
  return std::visit(
      Overloaded{
          [](const BoxSet& b) { return BoundingBox{b.lower, b.upper}; },
          [](const BallSet& b) {
            return BoundingBox{(b.center.array() - b.radius).matrix(),
                               (b.center.array() + b.radius).matrix()};
          },
          [](const SimplexSet& s) {
            const auto n = static_cast<Eigen::Index>(s.dimension);
            return BoundingBox{Vector::Zero(n), Vector::Ones(n)};
          },
          [this](const ProductSet& p) {
            const auto n = static_cast<Eigen::Index>(dimension_);
            BoundingBox out{Vector(n), Vector(n)};
            Eigen::Index offset = 0;
            for (const auto& part : p.parts) {
              const auto m = static_cast<Eigen::Index>(part.dimension());
              auto sub = part.bounding_box();
              out.lower.segment(offset, m) = sub.lower;
              out.upper.segment(offset, m) = sub.upper;
              offset += m;
            }
            return out;
          },
      },
      variant_);
}

Vector FeasibleSet::center() const {
  const auto bb = bounding_box();
  return 0.5 * (bb.lower + bb.upper);
}

Vector FeasibleSet::sample(std::mt19937_64& rng) const {
  return std::visit(
      Overloaded{
          [&](const BoxSet& b) -> Vector {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            Vector x(b.lower.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) {
              x[i] = b.lower[i] + u(rng) * (b.upper[i] - b.lower[i]);
            }
            return x;
          },
          [&](const BallSet& b) -> Vector {
            std::normal_distribution<double> g(0.0, 1.0);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            const auto n = b.center.size();
            Vector d(n);
            double norm = 0.0;
            do {
              for (Eigen::Index i = 0; i < n; ++i) d[i] = g(rng);
              norm = d.norm();
            } while (norm == 0.0);
            const double r =
                b.radius * std::pow(u(rng), 1.0 / static_cast<double>(n));
            return b.center + d * (r / norm);
          },
          [&](const SimplexSet& s) -> Vector {
            std::exponential_distribution<double> e(1.0);
            Vector x(static_cast<Eigen::Index>(s.dimension));
            for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = e(rng);
            return x / x.sum();
          },
          [&](const ProductSet& p) -> Vector {
            Vector x(static_cast<Eigen::Index>(dimension_));
            Eigen::Index offset = 0;
            for (const auto& part : p.parts) {
              const auto m = static_cast<Eigen::Index>(part.dimension());
              x.segment(offset, m) = part.sample(rng);
              offset += m;
            }
            return x;
          },
      },
      variant_);
}

Vector VIProblem::evaluate(const Vector& x) const {
  require_dimension(x, dimension(), "operator input");
  Vector fx = op(x);
  require_dimension(fx, dimension(), "operator output");
  if (!fx.allFinite()) {
    throw NumericError("operator of '" + name + "' returned a non-finite value");
  }
  return fx;
}

Matrix VIProblem::evaluate_jacobian(const Vector& x) const {
  if (!jacobian) {
    throw ConfigError("problem '" + name + "' has no Jacobian");
  }
  require_dimension(x, dimension(), "jacobian input");
  Matrix j = (*jacobian)(x);
  const auto n = static_cast<Eigen::Index>(dimension());
  if (j.rows() != n || j.cols() != n) {
    throw DimensionError("jacobian of '" + name + "' has wrong shape");
  }
  return j;
}

VIProblem make_affine_problem(std::string name, FeasibleSet set, Matrix matrix,
                              Vector offset) {
  const auto n = static_cast<Eigen::Index>(set.dimension());
  if (matrix.rows() != n || matrix.cols() != n || offset.size() != n) {
    throw DimensionError("affine operator does not match set dimension");
  }
  VIProblem p;
  p.name = std::move(name);
  p.set = std::move(set);
  p.op = [matrix, offset](const Vector& x) -> Vector {
    return matrix * x + offset;
  };
  p.jacobian = [matrix](const Vector&) -> Matrix { return matrix; };
  p.lipschitz = matrix.jacobiSvd().singularValues()(0);
  p.spec = AffineOperator{std::move(matrix), std::move(offset)};
  return p;
}

void validate_problem(const VIProblem& problem) {
  if (!problem.op) throw ConfigError("problem '" + problem.name + "' has no operator");
  const Vector probe = problem.set.center();
  (void)problem.evaluate(problem.set.project(probe));
  if (problem.lipschitz && !(*problem.lipschitz > 0.0)) {
    throw ConfigError("lipschitz constant must be positive");
  }
  if (problem.lipschitz_p && !(*problem.lipschitz_p > 0.0)) {
    throw ConfigError("lipschitz_p must be positive");
  }
  for (const auto& s : problem.declared_solutions) {
    if (!problem.set.contains(s, 1e-12)) {
      throw InfeasiblePointError("declared solution of '" + problem.name +
                                 "' lies outside the feasible set");
    }
  }
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::GP: return "gp";
    case SolverKind::EG: return "eg";
    case SolverKind::ARE: return "are";
  }
  return "unknown";
}

SolverKind solver_from_string(const std::string& s) {
  if (s == "gp" || s == "GP") return SolverKind::GP;
  if (s == "eg" || s == "EG") return SolverKind::EG;
  if (s == "are" || s == "ARE") return SolverKind::ARE;
  throw ConfigError("unknown solver '" + s + "' (expected gp, eg or are)");
}

const Vector& Trajectory::next_iterate(std::size_t k) const {
  if (k >= iterates.size()) throw Error("next_iterate: index out of range");
  return k + 1 < iterates.size() ? iterates[k + 1].x : final_x;
}

const Vector& Trajectory::test_point(std::size_t k) const {
  const auto& rec = iterates.at(k);
  if (solver == SolverKind::GP || !rec.x_half) return rec.x;
  return *rec.x_half;
}

std::size_t Trajectory::argmin_residual(std::size_t count) const {
  count = std::min(count, iterates.size());
  if (count == 0) throw Error("argmin_residual: empty trajectory");
  std::size_t best = 0;
  for (std::size_t k = 1; k < count; ++k) {
    if (iterates[k].residual_sq < iterates[best].residual_sq) best = k;
  }
  return best;
}

double Trajectory::min_residual_sq() const {
  return iterates.empty() ? 0.0 : iterates[k_min].residual_sq;
}

void validate_config(const SolverConfig& config) {
  if (!(config.step > 0.0) || !std::isfinite(config.step)) {
    throw ConfigError("step must be positive");
  }
  if (config.max_iters == 0) throw ConfigError("max_iters must be positive");
  if (config.order != 1 && config.order != 2) {
    throw ConfigError("order must be 1 or 2");
  }
  if (!(config.tau >= 0.0 && config.tau < 1.0)) {
    throw ConfigError("tau must lie in [0, 1)");
  }
  if (!(config.delta > 0.0)) throw ConfigError("delta must be positive");
  if (!(config.inner_tol > 0.0)) throw ConfigError("inner_tol must be positive");
  if (config.inner_max_iters == 0) {
    throw ConfigError("inner_max_iters must be positive");
  }
}

}  // namespace vilab

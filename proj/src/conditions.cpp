#include "vilab/conditions.hpp"

#include "vilab/merit.hpp"
#include "vilab/projection.hpp"
#include "vilab/sampling.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace vilab {

namespace {

constexpr std::array<std::pair<ConditionKind, const char*>, 14> kConditionNames{{
    {ConditionKind::MONOTONE, "MONOTONE"},
    {ConditionKind::STRONGLY_MONOTONE, "STRONGLY_MONOTONE"},
    {ConditionKind::PSEUDO_MONOTONE, "PSEUDO_MONOTONE"},
    {ConditionKind::STRONG_PSEUDO, "STRONG_PSEUDO"},
    {ConditionKind::QUASI_MONOTONE, "QUASI_MONOTONE"},
    {ConditionKind::WEAK_SHARP, "WEAK_SHARP"},
    {ConditionKind::MINTY, "MINTY"},
    {ConditionKind::STRONG_MINTY, "STRONG_MINTY"},
    {ConditionKind::LOCAL_MINTY, "LOCAL_MINTY"},
    {ConditionKind::LOCAL_MINTY_PLUS, "LOCAL_MINTY_PLUS"},
    {ConditionKind::LOCAL_MINTY_STAR, "LOCAL_MINTY_STAR"},
    {ConditionKind::GP, "GP"},
    {ConditionKind::GP_PLUS, "GP_PLUS"},
    {ConditionKind::GP_STAR, "GP_STAR"},
}};

// Tracks the most negative value seen for one pointwise condition.
struct WorstCase {
  double value = std::numeric_limits<double>::infinity();
  Witness witness;

  void offer(double v, const Vector& x, const Vector* y, const Vector* x_star) {
    if (v < value) {
      value = v;
      witness.x = x;
      witness.y = y ? std::optional<Vector>(*y) : std::nullopt;
      witness.x_star = x_star ? std::optional<Vector>(*x_star) : std::nullopt;
      witness.value = v;
    }
  }

  bool violated() const { return value < -kConditionTol; }
};

ConditionReport make_report(ConditionKind kind, const WorstCase& worst,
                            const ConditionParameters& params) {
  ConditionReport r;
  r.condition = kind;
  r.parameters = params;
  if (worst.violated()) {
    r.verdict = Verdict::VIOLATED;
    r.witness = worst.witness;
  }
  return r;
}

// One orbit of the governing map with everything the inequalities need.
struct OrbitTerm {
  Vector x;
  Vector fx;
  Vector m;   // M(x; t)
  Vector fm;  // F(M(x; t))
};

std::vector<OrbitTerm> build_orbit(const VIProblem& problem, const Vector& x0,
                                   double t, std::size_t length,
                                   bool extragradient) {
  require_feasible(problem, x0, "sequence start point");
  std::vector<OrbitTerm> orbit;
  orbit.reserve(length);
  Vector x = x0;
  for (std::size_t j = 0; j < length; ++j) {
    OrbitTerm term;
    term.fx = problem.evaluate(x);
    term.m = problem.set.project(x - t * term.fx);
    term.fm = problem.evaluate(term.m);
    Vector next = extragradient ? problem.set.project(x - t * term.fm) : term.m;
    term.x = std::move(x);
    orbit.push_back(std::move(term));
    x = std::move(next);
  }
  return orbit;
}

double term_value(ConditionKind kind, const OrbitTerm& term, const Vector& c,
                  double t, double delta) {
  switch (kind) {
    case ConditionKind::LOCAL_MINTY:
      return term.fx.dot(term.x - c);
    case ConditionKind::LOCAL_MINTY_PLUS:
      return term.fm.dot(term.m - c);
    case ConditionKind::LOCAL_MINTY_STAR:
      return term.fx.dot(term.m - c);
    case ConditionKind::GP:
    case ConditionKind::GP_PLUS:
      return 4.0 * (1.0 + delta) * t * term.fm.dot(term.m - c) +
             (term.m - term.x).squaredNorm();
    case ConditionKind::GP_STAR:
      return 2.0 * (1.0 + delta) * t * term.fx.dot(term.m - c) +
             (term.m - term.x).squaredNorm();
    default:
      throw ConfigError(to_string(kind) + " is not a sequence condition");
  }
}

// Per-candidate outcome along one orbit.
struct CandidateOutcome {
  bool satisfied = true;
  std::size_t first_violation = 0;
  double value = 0.0;
};

std::vector<CandidateOutcome> evaluate_orbit(const std::vector<OrbitTerm>& orbit,
                                             ConditionKind kind,
                                             std::span<const Vector> candidates,
                                             double t, double delta) {
  std::vector<CandidateOutcome> out(candidates.size());
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    for (std::size_t j = 0; j < orbit.size(); ++j) {
      const double v = term_value(kind, orbit[j], candidates[c], t, delta);
      if (v < -kConditionTol) {
        out[c] = {false, j, v};
        break;
      }
    }
  }
  return out;
}

// Candidate whose first violation comes latest (ties: lowest index).
std::size_t most_persistent(const std::vector<CandidateOutcome>& outcomes) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < outcomes.size(); ++c) {
    if (outcomes[c].first_violation > outcomes[best].first_violation) best = c;
  }
  return best;
}

void require_sequence_inputs(ConditionKind condition, double t, double delta,
                             std::size_t length,
                             std::span<const Vector> candidates) {
  if (!is_sequence_condition(condition)) {
    throw ConfigError(to_string(condition) + " is not a sequence condition");
  }
  if (candidates.empty()) throw ConfigError("no candidate solutions supplied");
  if (!(t > 0.0)) throw ConfigError("t must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (length == 0) throw ConfigError("sequence length must be positive");
}

}  // namespace

std::string to_string(ConditionKind kind) {
  for (const auto& [k, name] : kConditionNames) {
    if (k == kind) return name;
  }
  return "UNKNOWN";
}

ConditionKind condition_from_string(const std::string& s) {
  std::string upper = s;
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) {
    return c == '-' ? '_' : static_cast<char>(std::toupper(c));
  });
  for (const auto& [k, name] : kConditionNames) {
    if (upper == name) return k;
  }
  throw ConfigError("unknown condition '" + s + "'");
}

std::string to_string(Verdict verdict) {
  return verdict == Verdict::VIOLATED ? "VIOLATED" : "SATISFIED_ON_SAMPLES";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "VIOLATED") return Verdict::VIOLATED;
  if (s == "SATISFIED_ON_SAMPLES" || s == "SATISFIED") {
    return Verdict::SATISFIED_ON_SAMPLES;
  }
  throw ConfigError("unknown verdict '" + s + "'");
}

bool is_sequence_condition(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::LOCAL_MINTY:
    case ConditionKind::LOCAL_MINTY_PLUS:
    case ConditionKind::LOCAL_MINTY_STAR:
    case ConditionKind::GP:
    case ConditionKind::GP_PLUS:
    case ConditionKind::GP_STAR:
      return true;
    default:
      return false;
  }
}

bool uses_extragradient_orbit(ConditionKind kind) {
  return kind == ConditionKind::LOCAL_MINTY_PLUS ||
         kind == ConditionKind::GP_PLUS;
}

std::vector<Vector> candidate_solutions(const VIProblem& problem,
                                        std::size_t grid_samples) {
  std::vector<Vector> out = problem.declared_solutions;
  if (problem.dimension() > kGridMaxDimension) return out;
  for (const auto& p : probe_points(problem.set, grid_samples, 0)) {
    if (gap(problem, p) > kCandidateGapTol) continue;
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const Vector& q) {
      return (q - p).norm() < 1e-9;
    });
    if (!duplicate) out.push_back(p);
  }
  return out;
}

std::vector<ConditionReport> classify_operator(const VIProblem& problem,
                                               std::size_t samples,
                                               std::uint64_t seed, double mu) {
  if (samples < 2) throw ConfigError("classify_operator: need at least 2 samples");
  if (problem.declared_solutions.empty() &&
      problem.dimension() > kGridMaxDimension) {
    throw ConfigError("classify_operator: '" + problem.name +
                      "' has no declared solutions and dimension > 3; no "
                      "source of Minty candidates");
  }
  const ConditionParameters params{0.0, 0.0, mu, samples, 0, seed};

  std::mt19937_64 rng(seed);
  std::vector<Vector> points;
  std::vector<Vector> values;
  points.reserve(2 * samples);
  values.reserve(2 * samples);
  for (std::size_t i = 0; i < 2 * samples; ++i) {
    points.push_back(problem.set.sample(rng));
    values.push_back(problem.evaluate(points.back()));
  }

  WorstCase monotone, strongly, pseudo, strong_pseudo, quasi;
  for (std::size_t i = 0; i < samples; ++i) {
    for (int order = 0; order < 2; ++order) {
      const std::size_t a = 2 * i + static_cast<std::size_t>(order);
      const std::size_t b = 2 * i + 1 - static_cast<std::size_t>(order);
      const Vector& x = points[a];
      const Vector& y = points[b];
      const Vector d = x - y;
      const double dd = d.squaredNorm();
      const double fx_d = values[a].dot(d);
      const double fy_d = values[b].dot(d);
      if (order == 0) {
        const double mono = (values[a] - values[b]).dot(d);
        monotone.offer(mono, x, &y, nullptr);
        strongly.offer(mono - mu * dd, x, &y, nullptr);
      }
      if (fy_d >= 0.0) {
        pseudo.offer(fx_d, x, &y, nullptr);
        strong_pseudo.offer(fx_d - mu * dd, x, &y, nullptr);
      }
      if (fy_d > 0.0) quasi.offer(fx_d, x, &y, nullptr);
    }
  }

  std::vector<ConditionReport> reports;
  reports.push_back(make_report(ConditionKind::MONOTONE, monotone, params));
  reports.push_back(make_report(ConditionKind::STRONGLY_MONOTONE, strongly, params));
  reports.push_back(make_report(ConditionKind::PSEUDO_MONOTONE, pseudo, params));
  reports.push_back(make_report(ConditionKind::STRONG_PSEUDO, strong_pseudo, params));
  reports.push_back(make_report(ConditionKind::QUASI_MONOTONE, quasi, params));

  const auto candidates = candidate_solutions(problem);

  // Weak sharpness must hold at every solution.
  WorstCase sharp;
  for (const auto& c : candidates) {
    const Vector fc = problem.evaluate(c);
    for (const auto& x : points) {
      sharp.offer(fc.dot(x - c) - mu * (x - c).squaredNorm(), x, nullptr, &c);
    }
  }
  reports.push_back(make_report(ConditionKind::WEAK_SHARP, sharp, params));

  // Minty-type: some candidate must pass; otherwise report the candidate
  // whose worst value is least negative.
  for (const auto kind : {ConditionKind::MINTY, ConditionKind::STRONG_MINTY}) {
    const double m = kind == ConditionKind::STRONG_MINTY ? mu : 0.0;
    std::optional<WorstCase> best;
    for (const auto& c : candidates) {
      WorstCase w;
      for (std::size_t i = 0; i < points.size(); ++i) {
        w.offer(values[i].dot(points[i] - c) - m * (points[i] - c).squaredNorm(),
                points[i], nullptr, &c);
      }
      if (!best || w.value > best->value) best = w;
    }
    reports.push_back(make_report(kind, best.value_or(WorstCase{}), params));
    if (!best) {
      // No candidate at all: nothing can certify the condition.
      reports.back().verdict = Verdict::VIOLATED;
    }
  }
  return reports;
}

ConditionReport check_sequence_condition(const VIProblem& problem,
                                         ConditionKind condition,
                                         const Vector& x0, double t,
                                         double delta, std::size_t length,
                                         std::span<const Vector> candidates) {
  const Vector starts[] = {x0};
  return check_orbits(problem, condition, starts, t, delta, length, candidates);
}

ConditionReport check_orbits(const VIProblem& problem, ConditionKind condition,
                             std::span<const Vector> starts, double t,
                             double delta, std::size_t length,
                             std::span<const Vector> candidates) {
  require_sequence_inputs(condition, t, delta, length, candidates);
  if (starts.empty()) throw ConfigError("no start points supplied");

  ConditionReport report;
  report.condition = condition;
  report.parameters = {t, delta, 0.0, starts.size(), length, 0};

  std::vector<bool> works_everywhere(candidates.size(), true);
  const bool eg = uses_extragradient_orbit(condition);
  for (const auto& x0 : starts) {
    const auto orbit = build_orbit(problem, x0, t, length, eg);
    const auto outcomes = evaluate_orbit(orbit, condition, candidates, t, delta);
    std::optional<std::size_t> chosen;
    for (std::size_t c = 0; c < outcomes.size(); ++c) {
      if (!outcomes[c].satisfied) {
        works_everywhere[c] = false;
      } else if (!chosen) {
        chosen = c;
      }
    }
    report.orbit_candidates.push_back(chosen);
    if (!chosen && report.verdict == Verdict::SATISFIED_ON_SAMPLES) {
      const std::size_t best = most_persistent(outcomes);
      const auto& o = outcomes[best];
      report.verdict = Verdict::VIOLATED;
      report.witness = Witness{orbit[o.first_violation].x, std::nullopt,
                               candidates[best], o.value, o.first_violation};
    }
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (works_everywhere[c]) {
      report.uniform_candidate = c;
      break;
    }
  }
  return report;
}

double sequence_condition_value(const VIProblem& problem,
                                ConditionKind condition, const Vector& x,
                                const Vector& x_star, double t, double delta) {
  const auto orbit = build_orbit(problem, x, t, 1, false);
  return term_value(condition, orbit.front(), x_star, t, delta);
}

double minty_residual(const VIProblem& problem, const Vector& candidate,
                      std::size_t samples, std::uint64_t seed) {
  require_feasible(problem, candidate, "minty_residual");
  double worst = 0.0;
  for (const auto& x : probe_points(problem.set, samples, seed)) {
    worst = std::min(worst, problem.evaluate(x).dot(x - candidate));
  }
  return -worst;
}

double reevaluate_witness(const VIProblem& problem,
                          const ConditionReport& report) {
  if (!report.witness) throw ConfigError("report has no witness");
  const auto& w = *report.witness;
  const double mu = report.parameters.mu;
  if (is_sequence_condition(report.condition)) {
    return sequence_condition_value(problem, report.condition, w.x, *w.x_star,
                                    report.parameters.t,
                                    report.parameters.delta);
  }
  const Vector fx = problem.evaluate(w.x);
  switch (report.condition) {
    case ConditionKind::MONOTONE:
      return (fx - problem.evaluate(*w.y)).dot(w.x - *w.y);
    case ConditionKind::STRONGLY_MONOTONE:
      return (fx - problem.evaluate(*w.y)).dot(w.x - *w.y) -
             mu * (w.x - *w.y).squaredNorm();
    case ConditionKind::PSEUDO_MONOTONE:
    case ConditionKind::QUASI_MONOTONE:
      return fx.dot(w.x - *w.y);
    case ConditionKind::STRONG_PSEUDO:
      return fx.dot(w.x - *w.y) - mu * (w.x - *w.y).squaredNorm();
    case ConditionKind::WEAK_SHARP:
      return problem.evaluate(*w.x_star).dot(w.x - *w.x_star) -
             mu * (w.x - *w.x_star).squaredNorm();
    case ConditionKind::MINTY:
      return fx.dot(w.x - *w.x_star);
    case ConditionKind::STRONG_MINTY:
      return fx.dot(w.x - *w.x_star) - mu * (w.x - *w.x_star).squaredNorm();
    default:
      break;
  }
  throw ConfigError("cannot re-evaluate witness for " + to_string(report.condition));
}

const ConditionReport& find_report(std::span<const ConditionReport> reports,
                                   ConditionKind kind) {
  for (const auto& r : reports) {
    if (r.condition == kind) return r;
  }
  throw Error("no report for " + to_string(kind));
}

}  // namespace vilab

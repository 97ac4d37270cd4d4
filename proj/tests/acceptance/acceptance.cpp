// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include "vilab/conditions.hpp"
#include "vilab/games.hpp"
#include "vilab/harness.hpp"
#include "vilab/merit.hpp"
#include "vilab/problems.hpp"
#include "vilab/sampling.hpp"
#include "vilab/solvers.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace vilab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::string fit_text(const RateFit& f) {
  std::ostringstream os;
  if (f.exact_convergence) {
    os << "EXACT_CONVERGENCE";
  } else {
    os << "slope=" << f.slope << " r2=" << f.r_squared;
    if (f.floored_points > 0) os << " floored=" << f.floored_points;
  }
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SolverConfig step_config(double step, std::size_t iters = 100) {
  SolverConfig c;
  c.step = step;
  c.max_iters = iters;
  return c;
}

Outcome are_rate(RateMetric metric, double threshold, double budget_s) {
  const auto start = std::chrono::steady_clock::now();
  const auto& p = get_problem("rotation-ball").problem;
  const auto fit = fit_rate(p, SolverKind::ARE, step_config(1.0 / *p.lipschitz), vec({0.5, 0.5}),
                            metric);
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << fit_text(fit) << " threshold=" << threshold << " time=" << elapsed << "s (<" << budget_s
     << "s)";
  return {(fit.exact_convergence || fit.slope <= threshold) && elapsed < budget_s, os.str()};
}

Outcome criterion_1() { return are_rate(RateMetric::MIN_RESIDUAL_SQ, -0.9, 5.0); }
Outcome criterion_2() { return are_rate(RateMetric::GAP_AT_KN, -0.4, 10.0); }

Outcome criterion_3() {
  const auto& p = get_problem("bilinear-saddle-box").problem;
  const double t = 1.0 / (std::sqrt(2.0) * *p.lipschitz);
  const auto fit = fit_rate(p, SolverKind::EG, step_config(t), vec({1.0, -1.0, -1.0, 1.0}),
                            RateMetric::GAP_AT_KN);
  std::ostringstream os;
  os << "t=" << t << " " << fit_text(fit) << " threshold=-0.4";
  return {fit.exact_convergence || fit.slope <= -0.4, os.str()};
}

Outcome criterion_4() {
  const auto& p = get_problem("neg-identity-1d").problem;
  const auto starts = seeded_starts(p.set, 16, 404);
  std::size_t exact = 0, sloped = 0, failed = 0;
  for (const auto& x0 : starts) {
    const auto fit = fit_rate(p, SolverKind::GP, step_config(0.5), x0, RateMetric::MIN_RESIDUAL_SQ);
    if (fit.exact_convergence) ++exact;
    else if (fit.slope <= -0.9) ++sloped;
    else ++failed;
  }
  std::ostringstream os;
  os << starts.size() << " starts: exact=" << exact << " slope<=-0.9: " << sloped
     << " failed=" << failed;
  return {failed == 0, os.str()};
}

Outcome criterion_5() {
  const auto& p = get_problem("neg-identity-1d").problem;
  auto starts = seeded_starts(p.set, 32, 505);
  starts.push_back(vec({0.0}));
  const ConditionKind family[] = {ConditionKind::LOCAL_MINTY,      ConditionKind::LOCAL_MINTY_PLUS,
                                  ConditionKind::LOCAL_MINTY_STAR, ConditionKind::GP,
                                  ConditionKind::GP_PLUS,          ConditionKind::GP_STAR};
  std::size_t violations = 0;
  for (auto kind : family) {
    for (const auto& x0 : starts) {
      // the candidate scheme: x* = sign(x0)
      const double s = x0[0] > 0 ? 1.0 : (x0[0] < 0 ? -1.0 : 0.0);
      const std::vector<Vector> cand{vec({s})};
      const auto r = check_sequence_condition(p, kind, x0, 0.5, 1.0, 100, cand);
      if (!r.satisfied()) ++violations;
    }
  }
  std::size_t minty_refuted = 0;
  for (double c : {-1.0, 0.0, 1.0}) {
    if (minty_residual(p, vec({c}), 2001, 0) > kConditionTol) ++minty_refuted;
  }
  const auto reports = classify_operator(p, 10000, 5);
  const bool minty_violated = find_report(reports, ConditionKind::MINTY).verdict == Verdict::VIOLATED;
  std::ostringstream os;
  os << "sequence violations=" << violations << " over 6 conditions x " << starts.size()
     << " orbits; MINTY refuted for " << minty_refuted << "/3 candidates";
  return {violations == 0 && minty_refuted == 3 && minty_violated, os.str()};
}

Outcome criterion_6() {
  const auto& p = get_problem("rotation-ball").problem;
  const double eps = 0.01, t = 0.5, delta = 1.0;
  const auto r = check_sequence_condition(p, ConditionKind::GP_STAR, vec({eps, 0.0}), t, delta, 100,
                                          p.declared_solutions);
  // -2(1+delta) t^2 eps^2 + t^2 eps^2
  const double expected = -2.0 * (1.0 + delta) * t * t * eps * eps + t * t * eps * eps;
  const bool violated = r.verdict == Verdict::VIOLATED && r.witness.has_value();
  const double value = violated ? r.witness->value : 0.0;
  const auto reports = classify_operator(p, 10000, 6);
  const bool monotone = find_report(reports, ConditionKind::MONOTONE).satisfied();
  std::ostringstream os;
  os << "GP* " << to_string(r.verdict) << " witness=" << value << " expected=" << expected
     << " |diff|=" << std::abs(value - expected) << "; MONOTONE "
     << to_string(find_report(reports, ConditionKind::MONOTONE).verdict);
  return {violated && std::abs(value - expected) <= 1e-12 && monotone, os.str()};
}

Outcome criterion_7() {
  const auto& p = get_problem("indef-diag-ball").problem;
  const auto starts = seeded_starts(p.set, 32, 707, true);
  const std::vector<Vector> cand{vec({1.0, 0.0})};
  std::size_t failures = 0, checks = 0;
  for (double t : {0.25, 0.5, 1.0}) {
    for (auto kind : {ConditionKind::LOCAL_MINTY, ConditionKind::LOCAL_MINTY_PLUS,
                      ConditionKind::LOCAL_MINTY_STAR}) {
      ++checks;
      if (!check_orbits(p, kind, starts, t, 1.0, 100, cand).satisfied()) ++failures;
    }
  }
  std::ostringstream os;
  os << checks << " (t, condition) pairs over 32 orbits of length 100: failures=" << failures;
  return {failures == 0, os.str()};
}

Outcome criterion_8() {
  std::size_t runs = 0, slacks = 0, bad = 0;
  double worst = 0.0;
  auto tally = [&](const std::vector<double>& s) {
    ++runs;
    for (double v : s) {
      ++slacks;
      worst = std::min(worst, v);
      if (v < -1e-8) ++bad;
    }
  };
  for (const auto& summary : list_problems()) {
    const auto& p = get_problem(summary.name).problem;
    if (p.declared_solutions.empty()) continue;
    const double l = lipschitz_or_estimate(p);
    std::mt19937_64 rng(808);
    const Vector x0 = p.set.sample(rng);
    const auto gp = solve_gp(p, step_config(0.5 / l, 200), x0);
    const auto eg = solve_eg(p, step_config(1.0 / (std::sqrt(2.0) * l), 200), x0);
    const auto are1 = solve_are(p, step_config(1.0 / l, 200), x0);
    std::optional<Trajectory> are2;
    if (p.jacobian && p.lipschitz_p) {
      SolverConfig c = step_config(1.0, 50);
      c.order = 2;
      are2 = solve_are(p, c, x0);
    }
    for (const auto& ref : p.declared_solutions) {
      tally(assert_iteration_inequality(InequalityKind::GP_LEMMA, gp, p, ref));
      tally(assert_iteration_inequality(InequalityKind::EG_LEMMA, eg, p, ref));
      tally(assert_iteration_inequality(InequalityKind::ARE_INEQ, are1, p, ref));
      if (are2) tally(assert_iteration_inequality(InequalityKind::ARE_INEQ, *are2, p, ref));
    }
  }
  std::ostringstream os;
  os << runs << " (trajectory, reference) pairs, " << slacks << " slacks, below -1e-8: " << bad
     << ", min slack=" << worst;
  return {bad == 0, os.str()};
}

Outcome criterion_9() {
  std::size_t counterexamples = 0, checked = 0;
  for (const auto& f : objective_library()) {
    for (const auto& c : random_points(f.set, 1000, 909)) {
      const auto r = check_minty_optimality(f, c, 401, 9);
      ++checked;
      if (r.minty.satisfied() && !r.global.satisfied()) ++counterexamples;
    }
  }
  // the registry instance and the objective describe the same operator
  const auto& opt = get_problem("neg-square-opt").problem;
  const auto& neg = get_objective("neg-square");
  bool same_operator = true;
  for (const auto& x : probe_points(opt.set, 101, 0)) {
    same_operator = same_operator && (opt.evaluate(x) - neg.grad(x)).norm() <= 1e-9;
  }
  std::size_t global_not_minty = 0;
  for (double s : {-1.0, 1.0}) {
    const auto r = check_minty_optimality(neg, vec({s}), 2001, 9);
    if (r.global.satisfied() && r.minty.verdict == Verdict::VIOLATED &&
        minty_residual(opt, vec({s}), 2001, 0) > kConditionTol) {
      ++global_not_minty;
    }
  }
  std::ostringstream os;
  os << checked << " candidates: (Minty pass and global fail)=" << counterexamples
     << "; neg-square-opt global solutions failing Minty: " << global_not_minty << "/2";
  return {counterexamples == 0 && same_operator && global_not_minty == 2, os.str()};
}

Outcome criterion_10() {
  double worst = 0.0;
  std::size_t problems = 0;
  for (const auto& summary : list_problems()) {
    const auto& p = get_problem(summary.name).problem;
    const double step = 1.0 / lipschitz_or_estimate(p);
    std::mt19937_64 rng(1010);
    const Vector x0 = p.set.sample(rng);
    const auto eg = solve_eg(p, step_config(step), x0);
    const auto are = solve_are(p, step_config(step), x0);
    ++problems;
    if (eg.iterates.size() != are.iterates.size()) return {false, summary.name + ": length mismatch"};
    for (std::size_t k = 0; k < eg.iterates.size(); ++k) {
      worst = std::max(worst, (eg.iterates[k].x - are.iterates[k].x).lpNorm<Eigen::Infinity>());
      worst = std::max(worst,
                       (*eg.iterates[k].x_half - *are.iterates[k].x_half).lpNorm<Eigen::Infinity>());
    }
    worst = std::max(worst, (eg.final_x - are.final_x).lpNorm<Eigen::Infinity>());
  }
  std::ostringstream os;
  os << problems << " problems x 100 iterations, max deviation=" << worst;
  return {worst <= 1e-12, os.str()};
}

Outcome criterion_11() {
  std::size_t points = 0, chain_violations = 0, gap_disagreements = 0;
  std::size_t n_mne = 0, n_ne = 0, n_qne = 0;
  for (const auto& g : game_library()) {
    const auto vi = game_to_vi(g);
    const auto nx = static_cast<Eigen::Index>(g.set_x.dimension());
    const auto ny = static_cast<Eigen::Index>(g.set_y.dimension());
    std::vector<Vector> zs = probe_points(vi.set, 441, 0);
    for (const auto& z : random_points(vi.set, 100, 1111)) zs.push_back(z);
    for (const auto& [x, y] : g.known_equilibria) {
      Vector z(nx + ny);
      z << x, y;
      zs.push_back(z);
    }
    for (const auto& z : zs) {
      const Vector x = z.head(nx), y = z.tail(ny);
      const auto r = classify_equilibrium(g, x, y, 401, 11);
      ++points;
      const bool mne = r.is_mne.satisfied(), ne = r.is_ne.satisfied(), qne = r.is_qne.satisfied();
      n_mne += mne;
      n_ne += ne;
      n_qne += qne;
      if ((mne && !ne) || (ne && !qne)) ++chain_violations;
      if (qne != (gap(vi, z) <= kStationarityTol)) ++gap_disagreements;
    }
  }
  std::ostringstream os;
  os << points << " points over " << game_library().size()
     << " games: chain violations=" << chain_violations
     << ", QNE/gap disagreements=" << gap_disagreements << " (MNE=" << n_mne << " NE=" << n_ne
     << " QNE=" << n_qne << ")";
  return {chain_violations == 0 && gap_disagreements == 0, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ARE p=1 residual rate on rotation-ball", criterion_1},
      {"ARE p=1 gap rate on rotation-ball", criterion_2},
      {"extra-gradient gap rate on bilinear-saddle-box", criterion_3},
      {"gradient projection on neg-identity-1d from 16 starts", criterion_4},
      {"neg-identity-1d sequence conditions and Minty", criterion_5},
      {"rotation-ball GP* witness and monotonicity", criterion_6},
      {"indef-diag-ball local Minty family for t in {0.25, 0.5, 1}", criterion_7},
      {"per-iteration inequalities on the registry", criterion_8},
      {"Minty pass implies global minimality", criterion_9},
      {"ARE p=1 equals extra-gradient", criterion_10},
      {"game hierarchy MNE => NE => QNE", criterion_11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %zu: %s | %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}

#include "vilab/harness.hpp"

#include "vilab/merit.hpp"
#include "vilab/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cfloat>
#include <cmath>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

namespace vilab {

std::string to_string(RateMetric metric) {
  return metric == RateMetric::MIN_RESIDUAL_SQ ? "MIN_RESIDUAL_SQ" : "GAP_AT_KN";
}

RateMetric metric_from_string(const std::string& s) {
  std::string u;
  for (char c : s) u += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (u == "MIN_RESIDUAL_SQ" || u == "RESIDUAL") return RateMetric::MIN_RESIDUAL_SQ;
  if (u == "GAP_AT_KN" || u == "GAP") return RateMetric::GAP_AT_KN;
  throw ConfigError("unknown rate metric '" + s + "'");
}

std::vector<std::size_t> default_checkpoints(std::size_t count, std::size_t lo,
                                             std::size_t hi) {
  if (count < 2 || lo == 0 || hi <= lo) throw ConfigError("bad checkpoint range");
  std::vector<std::size_t> out;
  const double a = std::log(static_cast<double>(lo));
  const double b = std::log(static_cast<double>(hi));
  for (std::size_t i = 0; i < count; ++i) {
    const double e = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    const auto n = static_cast<std::size_t>(std::llround(std::exp(e)));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

namespace {

void validate_checkpoints(const std::vector<std::size_t>& checkpoints) {
  if (checkpoints.size() < kMinCheckpoints) {
    throw ConfigError("rate fit needs at least 10 checkpoints");
  }
  if (checkpoints.front() == 0) throw ConfigError("checkpoints must be positive");
  for (std::size_t i = 1; i < checkpoints.size(); ++i) {
    if (checkpoints[i] <= checkpoints[i - 1]) {
      throw ConfigError("checkpoints must be strictly increasing");
    }
  }
}

}  // namespace

RateFit fit_trajectory(const Trajectory& trajectory, const VIProblem& problem,
                       RateMetric metric,
                       const std::vector<std::size_t>& checkpoints) {
  validate_checkpoints(checkpoints);
  if (trajectory.iterates.size() < checkpoints.back()) {
    throw ConfigError("trajectory shorter than the last checkpoint");
  }
  RateFit fit;
  fit.metric = metric;
  fit.window = {checkpoints.front(), checkpoints.back()};

  bool all_zero = true;
  for (std::size_t n : checkpoints) {
    const std::size_t k = trajectory.argmin_residual(n);
    const double v = metric == RateMetric::MIN_RESIDUAL_SQ
                         ? trajectory.iterates[k].residual_sq
                         : gap(problem, trajectory.test_point(k));
    fit.points.push_back({n, v});
    if (v != 0.0) all_zero = false;
  }
  if (all_zero) {
    fit.exact_convergence = true;
    return fit;
  }

  const double m = static_cast<double>(fit.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : fit.points) {
    double v = p.value;
    if (v <= 0.0) {
      v = DBL_MIN;
      ++fit.floored_points;
    }
    const double x = std::log(static_cast<double>(p.n));
    const double y = std::log(v);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / m;
  const double vy = syy - sy * sy / m;
  const double cxy = sxy - sx * sy / m;
  fit.slope = cxy / vx;
  fit.intercept = (sy - fit.slope * sx) / m;
  // A constant series is fit perfectly by a flat line.
  fit.r_squared = vy <= 0.0 ? 1.0 : std::clamp(cxy * cxy / (vx * vy), 0.0, 1.0);
  return fit;
}

RateFit fit_rate(const VIProblem& problem, SolverKind solver,
                 SolverConfig config, const Vector& x0, RateMetric metric,
                 const std::vector<std::size_t>& checkpoints) {
  validate_checkpoints(checkpoints);
  config.max_iters = checkpoints.back();
  config.record_gap_every = 0;
  const Trajectory traj = solve(solver, problem, config, x0);
  return fit_trajectory(traj, problem, metric, checkpoints);
}

void write_rate_csv(std::ostream& out, const std::vector<RateFit>& fits) {
  out << "metric,N,value\n";
  out.precision(17);
  for (const auto& f : fits) {
    for (const auto& p : f.points) {
      out << to_string(f.metric) << ',' << p.n << ',' << p.value << '\n';
    }
  }
}

Json to_json(const RateFit& fit) {
  Json points = Json::array();
  for (const auto& p : fit.points) points.push_back(Json{{"N", p.n}, {"value", p.value}});
  Json out{{"metric", to_string(fit.metric)},
           {"window", {fit.window.first, fit.window.second}}};
  if (fit.exact_convergence) {
    out["result"] = "EXACT_CONVERGENCE";
  } else {
    out["slope"] = fit.slope;
    out["intercept"] = fit.intercept;
    out["r_squared"] = fit.r_squared;
    out["floored_points"] = fit.floored_points;
  }
  out["points"] = points;
  return out;
}

VIProblem resolve_problem(const ExperimentConfig& config) {
  if (config.inline_problem) return problem_from_json(*config.inline_problem);
  return get_problem(config.problem).problem;
}

namespace {

ConditionReport run_request(const VIProblem& problem, const CheckRequest& req,
                            const Vector& x0) {
  if (!is_sequence_condition(req.condition)) {
    const auto reports = classify_operator(problem, req.samples, req.seed);
    return find_report(reports, req.condition);
  }
  const auto candidates = candidate_solutions(problem);
  const std::vector<Vector> starts{x0};
  return check_orbits(problem, req.condition, starts, req.t, req.delta,
                      req.length, candidates);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("I/O failure writing " + path.string());
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate_config(config.solver_config);
  const VIProblem problem = resolve_problem(config);

  Vector x0;
  if (config.x0) {
    x0 = *config.x0;
  } else {
    std::mt19937_64 rng(config.seed);
    x0 = problem.set.sample(rng);
  }

  if (config.out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*config.out_dir, ec);
    if (ec) throw Error("cannot create " + config.out_dir->string() + ": " + ec.message());
  }

  ExperimentResult result;
  const auto start = std::chrono::steady_clock::now();
  result.trajectory = solve(config.solver, problem, config.solver_config, x0);
  const auto stop = std::chrono::steady_clock::now();

  const auto& traj = result.trajectory;
  result.summary.k_N = traj.k_min;
  result.summary.min_residual_sq = traj.min_residual_sq();
  result.summary.final_gap = traj.iterates[traj.k_min].gap
                                 ? *traj.iterates[traj.k_min].gap
                                 : gap(problem, traj.test_point(traj.k_min));
  result.summary.iterations = traj.iterates.size();
  result.summary.wall_time_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();

  for (const auto& req : config.checks) {
    result.reports.push_back(run_request(problem, req, x0));
  }

  if (config.out_dir) {
    std::ostringstream jsonl;
    write_trajectory_jsonl(jsonl, traj);
    write_file(*config.out_dir / "trajectory.jsonl", jsonl.str());
    write_file(*config.out_dir / "summary.json",
               dump(to_json(result.summary, config.include_timing)) + "\n");
    if (!result.reports.empty()) {
      Json reports = Json::array();
      for (const auto& r : result.reports) reports.push_back(to_json(r));
      write_file(*config.out_dir / "conditions.json", dump(reports) + "\n");
    }
  }
  return result;
}

ConditionReport run_expected_check(const VIProblem& problem,
                                   const ExpectedCheck& check) {
  if (!is_sequence_condition(check.condition)) {
    const auto reports = classify_operator(problem, check.samples, check.seed, check.mu);
    return find_report(reports, check.condition);
  }
  const auto& candidates =
      check.candidates.empty() ? problem.declared_solutions : check.candidates;
  return check_orbits(problem, check.condition, check.starts, check.t,
                      check.delta, check.length, candidates);
}

std::size_t SuiteResult::mismatches() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const SuiteEntry& e) { return !e.matches; }));
}

SuiteResult check_suite(const std::string& problem_name) {
  const ProblemRecord& record = get_problem(problem_name);
  std::vector<std::future<ConditionReport>> futures;
  for (const auto& check : record.expected) {
    futures.push_back(std::async(std::launch::async, [&record, &check] {
      return run_expected_check(record.problem, check);
    }));
  }
  SuiteResult result;
  result.problem = problem_name;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    SuiteEntry e;
    e.expected = record.expected[i];
    e.report = futures[i].get();
    e.matches = e.report.verdict == e.expected.verdict;
    result.entries.push_back(std::move(e));
  }
  return result;
}

}  // namespace vilab

#include "vilab/conditions.hpp"
#include "vilab/harness.hpp"
#include "vilab/merit.hpp"
#include "vilab/problems.hpp"
#include "vilab/serialize.hpp"
#include "vilab/solvers.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace vilab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitSolver = 3;

struct Common {
  std::string problem;
  std::string problem_file;
  std::string x0;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
};

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("--x0: cannot parse '" + item + "'");
    }
  }
  if (values.empty()) throw ConfigError("--x0 is empty");
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::optional<Json> load_problem_file(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("problem file " + path + ": " + e.what());
  }
}

VIProblem load_problem(const Common& c) {
  if (auto j = load_problem_file(c.problem_file)) return problem_from_json(*j);
  if (c.problem.empty()) throw ConfigError("--problem or --problem-file is required");
  return get_problem(c.problem).problem;
}

Vector start_point(const Common& c, const VIProblem& problem) {
  if (!c.x0.empty()) return parse_vector(c.x0);
  std::mt19937_64 rng(c.seed);
  return problem.set.sample(rng);
}

void add_problem_options(CLI::App* cmd, Common& c) {
  cmd->add_option("--problem", c.problem, "registry problem name");
  cmd->add_option("--problem-file", c.problem_file, "problem JSON document");
}

void add_seed_option(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "random seed")->envname("VILAB_SEED");
}

void add_format_option(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << v;
  return os.str();
}

std::string vec_text(const Vector& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << std::setprecision(6) << v[i];
  os << ')';
  return os.str();
}

void write_text(const std::string& dir, const std::string& file, const std::string& text) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / file, std::ios::binary);
  if (!out) throw Error("cannot write " + (std::filesystem::path(dir) / file).string());
  out << text;
}

void print_condition_table(const std::vector<ConditionReport>& reports) {
  std::cout << std::left << std::setw(20) << "condition" << std::setw(22) << "verdict"
            << "witness\n";
  for (const auto& r : reports) {
    std::cout << std::setw(20) << to_string(r.condition) << std::setw(22) << to_string(r.verdict);
    if (r.witness) {
      std::cout << "x=" << vec_text(r.witness->x);
      if (r.witness->y) std::cout << " y=" << vec_text(*r.witness->y);
      if (r.witness->x_star) std::cout << " x*=" << vec_text(*r.witness->x_star);
      if (r.witness->k) std::cout << " k=" << *r.witness->k;
      std::cout << " value=" << fmt(r.witness->value);
    }
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vilab: variational inequality solvers, merit functions and condition checks"};
  app.require_subcommand(1);

  Common common;
  std::string solver = "eg";
  SolverConfig cfg;
  bool timing = false;
  double eps = 1e-6;
  std::size_t samples = 10000;
  std::vector<std::string> conditions;
  std::string metric = "residual";
  std::size_t checkpoint_count = 12;
  std::size_t min_iters = 100;
  std::size_t max_checkpoint = 10000;

  auto add_solver_options = [&](CLI::App* cmd) {
    cmd->add_option("--solver", solver, "solver")->check(CLI::IsMember({"gp", "eg", "are"}));
    cmd->add_option("--order", cfg.order, "ARE order")->check(CLI::IsMember({1, 2}));
    cmd->add_option("--step", cfg.step, "step size t");
    cmd->add_option("--tau", cfg.tau, "ARE p=2 approximation quality");
  };

  auto* list = app.add_subcommand("list", "list registry problems");
  add_format_option(list, common);

  auto* solve_cmd = app.add_subcommand("solve", "run a solver");
  add_problem_options(solve_cmd, common);
  add_solver_options(solve_cmd);
  solve_cmd->add_option("--iters", cfg.max_iters, "iterations N");
  solve_cmd->add_option("--x0", common.x0, "start point, comma separated");
  add_seed_option(solve_cmd, common);
  solve_cmd->add_option("--gap-every", cfg.record_gap_every, "record G every k iterations");
  solve_cmd->add_option("--inner-tol", cfg.inner_tol, "ARE p=2 inner tolerance");
  solve_cmd->add_option("--inner-max-iters", cfg.inner_max_iters, "ARE p=2 inner iteration cap");
  solve_cmd->add_option("--out", common.out, "output directory");
  solve_cmd->add_flag("--timing", timing, "include wall_time_ms in summary.json");
  add_format_option(solve_cmd, common);

  auto* merit_cmd = app.add_subcommand("merit", "evaluate merit functions at a point");
  add_problem_options(merit_cmd, common);
  merit_cmd->add_option("--x0", common.x0, "point, comma separated")->required();
  merit_cmd->add_option("--t", cfg.step, "step t of the projection residual");
  merit_cmd->add_option("--eps", eps, "epsilon for the epsilon-solution flags");
  merit_cmd->add_option("--samples", samples, "dual-gap samples");
  add_seed_option(merit_cmd, common);
  add_format_option(merit_cmd, common);

  auto* check_cmd = app.add_subcommand("check", "check structural and sequence conditions");
  add_problem_options(check_cmd, common);
  check_cmd->add_option("--condition", conditions, "conditions (default: all)");
  check_cmd->add_option("--x0", common.x0, "orbit start, comma separated");
  check_cmd->add_option("--t", cfg.step, "step t");
  check_cmd->add_option("--delta", cfg.delta, "delta of the GP family");
  check_cmd->add_option("--iters", cfg.max_iters, "orbit length");
  check_cmd->add_option("--samples", samples, "sampled pairs");
  add_seed_option(check_cmd, common);
  add_format_option(check_cmd, common);

  auto* rate_cmd = app.add_subcommand("rate", "fit an empirical convergence rate");
  add_problem_options(rate_cmd, common);
  add_solver_options(rate_cmd);
  rate_cmd->add_option("--metric", metric, "residual or gap");
  rate_cmd->add_option("--x0", common.x0, "start point, comma separated");
  add_seed_option(rate_cmd, common);
  rate_cmd->add_option("--iters", max_checkpoint, "largest checkpoint");
  rate_cmd->add_option("--min-iters", min_iters, "smallest checkpoint");
  rate_cmd->add_option("--checkpoints", checkpoint_count, "number of checkpoints");
  rate_cmd->add_option("--out", common.out, "output directory");
  add_format_option(rate_cmd, common);

  auto* suite_cmd = app.add_subcommand("suite", "reproduce registry expected verdicts");
  suite_cmd->add_option("--problem", common.problem, "one problem (default: all)");
  add_format_option(suite_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (list->parsed()) {
      const auto problems = list_problems();
      if (common.format == "json") {
        Json out = Json::array();
        for (const auto& p : problems) {
          out.push_back(Json{{"name", p.name}, {"dimension", p.dimension}, {"tags", p.tags}});
        }
        std::cout << dump(out) << '\n';
      } else {
        std::cout << "name,dimension,tags\n";
        for (const auto& p : problems) {
          std::string tags;
          for (const auto& t : p.tags) tags += (tags.empty() ? "" : ";") + t;
          std::cout << p.name << ',' << p.dimension << ',' << tags << '\n';
        }
      }
      return kExitOk;
    }

    if (solve_cmd->parsed()) {
      ExperimentConfig ec;
      ec.problem = common.problem;
      ec.inline_problem = load_problem_file(common.problem_file);
      if (!ec.inline_problem && ec.problem.empty()) {
        throw ConfigError("--problem or --problem-file is required");
      }
      ec.solver = solver_from_string(solver);
      ec.solver_config = cfg;
      if (!common.x0.empty()) ec.x0 = parse_vector(common.x0);
      ec.seed = common.seed;
      if (!common.out.empty()) ec.out_dir = common.out;
      ec.include_timing = timing;
      const auto result = run_experiment(ec);
      for (const auto& w : result.trajectory.warnings) std::cerr << "warning: " << w << '\n';
      if (common.format == "json") {
        Json out = to_json(result.summary, timing);
        out["final_x"] = to_json(result.trajectory.final_x);
        std::cout << dump(out) << '\n';
      } else {
        std::cout << std::setprecision(17) << "k_N,min_residual_sq,final_gap,iterations\n"
                  << result.summary.k_N << ',' << result.summary.min_residual_sq << ','
                  << result.summary.final_gap << ',' << result.summary.iterations << '\n';
      }
      return kExitOk;
    }

    if (merit_cmd->parsed()) {
      const VIProblem problem = load_problem(common);
      const auto r = merit_report(problem, parse_vector(common.x0), cfg.step, eps,
                                  samples, common.seed);
      if (common.format == "json") {
        std::cout << dump(to_json(r)) << '\n';
      } else {
        std::cout << std::left << std::setw(20) << "gap" << fmt(r.gap) << '\n'
                  << std::setw(20) << "dual_gap_estimate" << fmt(r.dual_gap_estimate) << '\n'
                  << std::setw(20) << "proj_residual" << fmt(r.proj_residual) << '\n'
                  << std::setw(20) << "epsilon_vi" << (r.epsilon_vi ? "true" : "false") << '\n'
                  << std::setw(20) << "epsilon_minty" << (r.epsilon_minty ? "true" : "false")
                  << '\n';
      }
      return kExitOk;
    }

    if (check_cmd->parsed()) {
      const VIProblem problem = load_problem(common);
      std::vector<ConditionKind> kinds;
      if (conditions.empty()) {
        for (int i = 0; i <= static_cast<int>(ConditionKind::GP_STAR); ++i) {
          kinds.push_back(static_cast<ConditionKind>(i));
        }
      } else {
        for (const auto& c : conditions) kinds.push_back(condition_from_string(c));
      }
      std::vector<ConditionReport> reports;
      std::optional<std::vector<ConditionReport>> pointwise;
      const Vector x0 = start_point(common, problem);
      const auto candidates = candidate_solutions(problem);
      for (auto kind : kinds) {
        if (is_sequence_condition(kind)) {
          const std::vector<Vector> starts{x0};
          reports.push_back(check_orbits(problem, kind, starts, cfg.step, cfg.delta,
                                         cfg.max_iters, candidates));
        } else {
          if (!pointwise) pointwise = classify_operator(problem, samples, common.seed);
          reports.push_back(find_report(*pointwise, kind));
        }
      }
      if (common.format == "json") {
        Json out = Json::array();
        for (const auto& r : reports) out.push_back(to_json(r));
        std::cout << dump(out) << '\n';
      } else {
        print_condition_table(reports);
      }
      return kExitOk;
    }

    if (rate_cmd->parsed()) {
      const VIProblem problem = load_problem(common);
      const Vector x0 = start_point(common, problem);
      const auto checkpoints = default_checkpoints(checkpoint_count, min_iters, max_checkpoint);
      const auto fit = fit_rate(problem, solver_from_string(solver), cfg, x0,
                                metric_from_string(metric), checkpoints);
      std::ostringstream csv;
      write_rate_csv(csv, {fit});
      const std::string json_text = dump(to_json(fit)) + "\n";
      if (!common.out.empty()) {
        write_text(common.out, "rate.csv", csv.str());
        write_text(common.out, "rate.json", json_text);
      }
      std::cout << (common.format == "csv" ? csv.str() : json_text);
      return kExitOk;
    }

    if (suite_cmd->parsed()) {
      std::vector<std::string> names;
      if (common.problem.empty()) {
        for (const auto& p : list_problems()) names.push_back(p.name);
      } else {
        names.push_back(common.problem);
      }
      std::size_t mismatches = 0;
      Json out = Json::array();
      for (const auto& name : names) {
        const auto result = check_suite(name);
        mismatches += result.mismatches();
        for (const auto& e : result.entries) {
          if (common.format == "json") {
            Json j = to_json(e.report);
            j["problem"] = name;
            j["expected"] = to_string(e.expected.verdict);
            j["match"] = e.matches;
            out.push_back(j);
          } else {
            std::cout << name << ',' << to_string(e.report.condition) << ','
                      << to_string(e.expected.verdict) << ',' << to_string(e.report.verdict)
                      << ',' << (e.matches ? "match" : "MISMATCH") << '\n';
          }
        }
      }
      if (common.format == "json") std::cout << dump(out) << '\n';
      if (mismatches > 0) {
        std::cerr << mismatches << " expected verdict(s) not reproduced\n";
        return kExitMismatch;
      }
      return kExitOk;
    }
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << " (after "
              << e.partial().iterates.size() << " iterations)\n";
    return kExitSolver;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

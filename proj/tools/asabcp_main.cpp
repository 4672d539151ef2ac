#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "asabcp/bench.hpp"
#include "asabcp/problems.hpp"
#include "asabcp/serialization.hpp"
#include "asabcp/solver.hpp"

namespace {

struct SolveOptions {
  std::string problem;
  std::string qp_file;
  long n = 10;
  std::uint64_t seed = 1;
  std::string json_path;
  std::string trace_path;
};

struct BenchOptions {
  std::string suite;
  std::string qp_dir;
  std::string solvers = "asa-bcp,pg";
  std::string out;
  int threads = 0;
};

struct ProfileOptions {
  std::string metrics;
  std::string metric = "fevals";
  std::string out;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

int run_solve(const SolveOptions& opts, const asabcp::SolverConfig& config) {
  asabcp::ProblemInstance instance =
      !opts.qp_file.empty()
          ? asabcp::load_qp(opts.qp_file)
          : asabcp::builtin(opts.problem, opts.n, opts.seed);

  asabcp::SolverConfig effective = config;
  if (!opts.trace_path.empty() &&
      effective.trace_level == asabcp::TraceLevel::none) {
    effective.trace_level = asabcp::TraceLevel::scalars;
  }
  const asabcp::SolveReport report = asabcp::solve(instance, effective);

  std::printf("%s status=%s f_final=%.8g stationarity=%.3g iters=%ld n_f=%ld\n",
              instance.name.c_str(), asabcp::to_string(report.status),
              report.f_final, report.stationarity, report.iterations,
              report.counters.n_f);

  if (!opts.json_path.empty()) {
    std::ofstream out(opts.json_path);
    if (!out) throw std::runtime_error("cannot open '" + opts.json_path + "'");
    out << asabcp::report_to_json(report).dump(2) << '\n';
  }
  if (!opts.trace_path.empty()) {
    std::ofstream out(opts.trace_path);
    if (!out) throw std::runtime_error("cannot open '" + opts.trace_path + "'");
    asabcp::write_trace_csv(report.trace, out);
  }
  return report.status == asabcp::SolveStatus::converged ? 0 : 2;
}

int run_bench(const BenchOptions& opts, const asabcp::SolverConfig& config) {
  std::vector<asabcp::ProblemInstance> problems;
  if (!opts.qp_dir.empty()) {
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(opts.qp_dir)) {
      if (entry.path().extension() == ".qp") paths.push_back(entry.path());
    }
    std::sort(paths.begin(), paths.end());
    for (const auto& path : paths) problems.push_back(asabcp::load_qp(path.string()));
    if (problems.empty()) {
      throw std::runtime_error("no .qp files under '" + opts.qp_dir + "'");
    }
  } else {
    if (opts.suite != "default") {
      throw std::runtime_error("unknown suite '" + opts.suite + "' (only: default)");
    }
    std::cerr << "building default suite...\n";
    problems = asabcp::default_suite();
  }

  std::vector<asabcp::SolverSpec> solvers;
  for (const std::string& name : split_list(opts.solvers)) {
    solvers.push_back(asabcp::solver_by_name(name));
  }

  const asabcp::MetricsTable table =
      asabcp::run_suite(solvers, problems, config, opts.threads);
  std::ofstream out(opts.out);
  if (!out) throw std::runtime_error("cannot open '" + opts.out + "'");
  asabcp::write_metrics_csv(table, out);

  long converged = 0;
  for (const auto& row : table.rows) {
    if (row.status == asabcp::SolveStatus::converged) ++converged;
  }
  std::printf("bench: %zu problems x %zu solvers, %ld/%zu runs converged -> %s\n",
              problems.size(), solvers.size(), converged, table.rows.size(),
              opts.out.c_str());
  return 0;
}

int run_profile(const ProfileOptions& opts) {
  std::ifstream in(opts.metrics);
  if (!in) throw std::runtime_error("cannot open '" + opts.metrics + "'");
  const asabcp::MetricsTable table = asabcp::read_metrics_csv(in);
  const asabcp::ProfileSet profiles = asabcp::performance_profile(
      table, asabcp::profile_metric_from_string(opts.metric));
  if (profiles.dropped_problems > 0) {
    std::cerr << "warning: dropped " << profiles.dropped_problems
              << " problem(s) on which every solver failed\n";
  }
  std::ofstream out(opts.out);
  if (!out) throw std::runtime_error("cannot open '" + opts.out + "'");
  asabcp::write_profile_csv(profiles, out);
  std::printf("profile(%s): %zu curves -> %s\n", opts.metric.c_str(),
              profiles.curves.size(), opts.out.c_str());
  return 0;
}

int run_list() {
  for (const asabcp::RegistryEntry& entry : asabcp::problem_registry()) {
    std::printf("%-16s %s\n", entry.name.c_str(), entry.description.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asa-bcp: two-stage active-set solver for bound-constrained minimization"};
  app.require_subcommand(1);

  asabcp::SolverConfig config;
  SolveOptions solve_opts;
  BenchOptions bench_opts;
  ProfileOptions profile_opts;

  CLI::App* solve_cmd = app.add_subcommand("solve", "minimize one problem");
  auto* problem_opt = solve_cmd->add_option("--problem", solve_opts.problem,
                                            "registered problem name");
  auto* file_opt = solve_cmd->add_option("--qp-file", solve_opts.qp_file,
                                         "QP text file to load");
  problem_opt->excludes(file_opt);
  file_opt->excludes(problem_opt);
  solve_cmd->add_option("--n", solve_opts.n, "problem dimension")
      ->capture_default_str();
  solve_cmd->add_option("--seed", solve_opts.seed, "generator seed")
      ->capture_default_str();
  solve_cmd->add_option("--tol", config.tol, "stationarity tolerance (sup-norm)")
      ->capture_default_str();
  solve_cmd->add_option("--max-iters", config.max_iters, "iteration budget")
      ->capture_default_str();
  solve_cmd->add_option("--max-fevals", config.max_fevals, "objective evaluation budget")
      ->capture_default_str();
  solve_cmd->add_option("-Z,--watchdog-z", config.watchdog_z,
                        "iterations without an objective check before the watchdog fires")
      ->capture_default_str();
  solve_cmd->add_option("-M,--history-m", config.history_m,
                        "reference-value history window")
      ->capture_default_str();
  solve_cmd->add_option("--eps0", config.eps0, "initial active-set estimate parameter")
      ->capture_default_str();
  solve_cmd->add_option("--json", solve_opts.json_path, "write the report as JSON");
  solve_cmd->add_option("--trace", solve_opts.trace_path, "write the iteration trace as CSV");

  CLI::App* bench_cmd = app.add_subcommand("bench", "run solvers over a problem suite");
  auto* suite_opt = bench_cmd->add_option("--suite", bench_opts.suite,
                                          "built-in suite name (default)");
  auto* dir_opt = bench_cmd->add_option("--qp-dir", bench_opts.qp_dir,
                                        "directory of .qp files");
  suite_opt->excludes(dir_opt);
  dir_opt->excludes(suite_opt);
  bench_cmd->add_option("--solvers", bench_opts.solvers, "comma-separated solver list")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_opts.out, "metrics CSV path")->required();
  bench_cmd->add_option("--tol", config.tol, "stationarity tolerance")
      ->capture_default_str();
  bench_cmd->add_option("--max-iters", config.max_iters, "iteration budget")
      ->capture_default_str();
  bench_cmd->add_option("--max-fevals", config.max_fevals, "objective evaluation budget")
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench_opts.threads,
                        "parallel problems (0: ASABCP_THREADS or hardware)")
      ->capture_default_str();

  CLI::App* profile_cmd =
      app.add_subcommand("profile", "performance profiles from a metrics CSV");
  profile_cmd->add_option("--metrics", profile_opts.metrics, "metrics CSV path")
      ->required();
  profile_cmd
      ->add_option("--metric", profile_opts.metric, "time|fevals|cg-iters")
      ->capture_default_str();
  profile_cmd->add_option("--out", profile_opts.out, "profile CSV path")->required();

  CLI::App* list_cmd = app.add_subcommand("list-problems", "print the problem registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) {
      if (solve_opts.problem.empty() && solve_opts.qp_file.empty()) {
        std::cerr << "solve: one of --problem or --qp-file is required\n";
        return 1;
      }
      return run_solve(solve_opts, config);
    }
    if (bench_cmd->parsed()) {
      if (bench_opts.suite.empty() && bench_opts.qp_dir.empty()) {
        bench_opts.suite = "default";
      }
      return run_bench(bench_opts, config);
    }
    if (profile_cmd->parsed()) return run_profile(profile_opts);
    if (list_cmd->parsed()) return run_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

#include "asabcp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "asabcp/active_set.hpp"

namespace asabcp {

SolveReport projected_gradient_solve(const ProblemInstance& problem,
                                     const SolverConfig& config) {
  return projected_gradient_solve(problem, config, default_start(problem));
}

SolveReport projected_gradient_solve(const ProblemInstance& problem,
                                     const SolverConfig& config,
                                     const Vector& x0) {
  config.validate();
  const ObjectiveModel& model = problem.model;
  const BoxBounds& bounds = problem.bounds;
  const auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t_start)
        .count();
  };

  SolveReport report;
  report.problem = problem.name;
  EvalCounters& counters = report.counters;

  Vector x = project(x0, bounds);
  double f = model.value(x, counters);
  Vector g = model.gradient(x, counters);
  double stationarity = g.allFinite()
                            ? stationarity_measure(x, g, bounds)
                            : std::numeric_limits<double>::quiet_NaN();
  double t_accepted = 1.0;
  long iter = 0;
  SolveStatus status;

  while (true) {
    if (!std::isfinite(f) || !g.allFinite()) {
      status = SolveStatus::diverged;
      break;
    }
    if (auto stop = check_termination(
            x, g, bounds, config, BudgetClock{iter, counters.n_f, elapsed()})) {
      status = *stop;
      break;
    }

    double step = std::min(t_accepted * 2.0, 1e12);
    bool accepted = false;
    Vector x_next;
    double f_next = 0.0;
    for (int trial = 0; trial <= config.max_backtracks; ++trial) {
      x_next = project(x - step * g, bounds);
      const double f_trial = model.value(x_next, counters);
      const double predicted = g.dot(x_next - x);
      if (predicted < 0.0 && std::isfinite(f_trial) &&
          f_trial <= f + config.gamma * predicted) {
        f_next = f_trial;
        accepted = true;
        break;
      }
      step *= config.delta;
    }
    if (!accepted) {
      status = SolveStatus::line_search_failure;
      break;
    }

    x = std::move(x_next);
    f = f_next;
    t_accepted = step;
    ++iter;
    g = model.gradient(x, counters);
    stationarity = g.allFinite() ? stationarity_measure(x, g, bounds)
                                 : std::numeric_limits<double>::quiet_NaN();

    if (config.trace_level != TraceLevel::none) {
      TraceRecord rec;
      rec.iter = iter;
      rec.f = f;
      rec.f_ref = f;
      rec.stationarity = stationarity;
      rec.alpha = step;
      rec.channel = StepChannel::line_search;
      if (config.trace_level == TraceLevel::full) rec.x = x;
      report.trace.push_back(std::move(rec));
    }
  }

  report.x_final = std::move(x);
  report.f_final = f;
  report.stationarity = stationarity;
  report.status = status;
  report.iterations = iter;
  return report;
}

std::vector<SolverSpec> standard_solvers() {
  return {
      {"asa-bcp",
       [](const ProblemInstance& p, const SolverConfig& c) { return solve(p, c); }},
      {"pg",
       [](const ProblemInstance& p, const SolverConfig& c) {
         return projected_gradient_solve(p, c);
       }},
  };
}

SolverSpec solver_by_name(const std::string& name) {
  for (SolverSpec& spec : standard_solvers()) {
    if (spec.name == name) return std::move(spec);
  }
  throw std::invalid_argument("unknown solver '" + name + "' (available: asa-bcp, pg)");
}

namespace {

int thread_budget(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ASABCP_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

MetricsTable run_suite(const std::vector<SolverSpec>& solvers,
                       const std::vector<ProblemInstance>& problems,
                       const SolverConfig& config, int threads) {
  if (solvers.empty() || problems.empty()) {
    throw std::invalid_argument("run_suite: solvers and problems must be non-empty");
  }

  MetricsTable table;
  table.rows.resize(problems.size() * solvers.size());

  auto run_problem = [&](std::size_t p) {
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      MetricsRow& row = table.rows[p * solvers.size() + s];
      row.problem = problems[p].name;
      row.solver = solvers[s].name;
      const auto t0 = std::chrono::steady_clock::now();
      SolveReport report;
      try {
        report = solvers[s].run(problems[p], config);
      } catch (const std::exception&) {
        report.status = SolveStatus::diverged;
        report.f_final = std::numeric_limits<double>::quiet_NaN();
        report.stationarity = std::numeric_limits<double>::quiet_NaN();
      }
      row.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      row.status = report.status;
      row.n_f = report.counters.n_f;
      row.n_g = report.counters.n_g;
      row.cg_iters = report.counters.cg_iters;
      row.f_final = report.f_final;
      row.stationarity = report.stationarity;
    }
  };

  const int workers =
      std::min<int>(thread_budget(threads), static_cast<int>(problems.size()));
  if (workers <= 1) {
    for (std::size_t p = 0; p < problems.size(); ++p) run_problem(p);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          const std::size_t p = next.fetch_add(1);
          if (p >= problems.size()) return;
          run_problem(p);
        }
      });
    }
    for (std::thread& worker : pool) worker.join();
  }

  // Flag problems whose converged runs disagree on the final objective.
  for (std::size_t p = 0; p < problems.size(); ++p) {
    double f_min = std::numeric_limits<double>::infinity();
    double f_max = -std::numeric_limits<double>::infinity();
    double scale = 1.0;
    bool any = false;
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      const MetricsRow& row = table.rows[p * solvers.size() + s];
      if (row.status != SolveStatus::converged) continue;
      f_min = std::min(f_min, row.f_final);
      f_max = std::max(f_max, row.f_final);
      scale = std::max(scale, std::abs(row.f_final));
      any = true;
    }
    if (any && f_max - f_min > 1e-3 * scale) {
      for (std::size_t s = 0; s < solvers.size(); ++s) {
        table.rows[p * solvers.size() + s].excluded = true;
      }
    }
  }
  return table;
}

const char* to_string(ProfileMetric metric) {
  switch (metric) {
    case ProfileMetric::time: return "time";
    case ProfileMetric::fevals: return "fevals";
    case ProfileMetric::cg_iters: return "cg-iters";
  }
  return "unknown";
}

ProfileMetric profile_metric_from_string(const std::string& name) {
  if (name == "time") return ProfileMetric::time;
  if (name == "fevals") return ProfileMetric::fevals;
  if (name == "cg-iters" || name == "cg_iters") return ProfileMetric::cg_iters;
  throw std::invalid_argument("unknown profile metric '" + name + "'");
}

ProfileSet performance_profile(const MetricsTable& table, ProfileMetric metric) {
  std::vector<std::string> solvers;
  std::vector<std::string> problems;
  for (const MetricsRow& row : table.rows) {
    if (std::find(solvers.begin(), solvers.end(), row.solver) == solvers.end()) {
      solvers.push_back(row.solver);
    }
    if (std::find(problems.begin(), problems.end(), row.problem) ==
        problems.end()) {
      problems.push_back(row.problem);
    }
  }
  if (solvers.empty() || problems.empty()) {
    throw std::invalid_argument("performance_profile: empty metrics table");
  }

  const double inf = std::numeric_limits<double>::infinity();
  auto cost_of = [&](const MetricsRow& row) -> double {
    if (row.status != SolveStatus::converged) return inf;
    switch (metric) {
      case ProfileMetric::time: return row.wall_time_s;
      case ProfileMetric::fevals: return static_cast<double>(row.n_f);
      case ProfileMetric::cg_iters: return static_cast<double>(row.cg_iters);
    }
    return inf;
  };

  // ratios[s][p]; excluded problems are skipped entirely.
  ProfileSet out;
  std::vector<std::vector<double>> ratios(solvers.size());
  long counted_problems = 0;
  for (const std::string& problem : problems) {
    std::vector<double> costs(solvers.size(), inf);
    bool excluded = false;
    for (const MetricsRow& row : table.rows) {
      if (row.problem != problem) continue;
      excluded = excluded || row.excluded;
      const auto s = static_cast<std::size_t>(
          std::find(solvers.begin(), solvers.end(), row.solver) -
          solvers.begin());
      costs[s] = cost_of(row);
    }
    if (excluded) continue;
    const double best = *std::min_element(costs.begin(), costs.end());
    if (!std::isfinite(best)) {
      ++out.dropped_problems;
      continue;
    }
    ++counted_problems;
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      ratios[s].push_back(best > 0.0 ? costs[s] / best
                                     : (costs[s] == best ? 1.0 : inf));
    }
  }
  if (counted_problems == 0) {
    throw std::invalid_argument("performance_profile: no usable problems");
  }

  std::vector<double> breakpoints;
  for (const auto& solver_ratios : ratios) {
    for (double r : solver_ratios) {
      if (std::isfinite(r)) breakpoints.push_back(r);
    }
  }
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()),
                    breakpoints.end());

  for (std::size_t s = 0; s < solvers.size(); ++s) {
    ProfileCurve curve;
    curve.solver = solvers[s];
    for (double tau : breakpoints) {
      const long hits = std::count_if(
          ratios[s].begin(), ratios[s].end(),
          [tau](double r) { return r <= tau; });
      curve.points.emplace_back(
          tau, static_cast<double>(hits) / static_cast<double>(counted_problems));
    }
    out.curves.push_back(std::move(curve));
  }
  return out;
}

namespace {

std::string csv_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_metrics_csv(const MetricsTable& table, std::ostream& out) {
  out << "problem,solver,status,wall_time_s,n_f,n_g,cg_iters,f_final,"
         "stationarity,excluded\n";
  for (const MetricsRow& row : table.rows) {
    out << row.problem << ',' << row.solver << ',' << to_string(row.status)
        << ',' << csv_double(row.wall_time_s) << ',' << row.n_f << ','
        << row.n_g << ',' << row.cg_iters << ',' << csv_double(row.f_final)
        << ',' << csv_double(row.stationarity) << ',' << (row.excluded ? 1 : 0)
        << '\n';
  }
}

MetricsTable read_metrics_csv(std::istream& in) {
  MetricsTable table;
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("metrics CSV: missing header");
  }
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 10) {
      throw std::runtime_error("metrics CSV: malformed row at line " +
                               std::to_string(line_no));
    }
    MetricsRow row;
    row.problem = fields[0];
    row.solver = fields[1];
    row.status = solve_status_from_string(fields[2]);
    row.wall_time_s = std::stod(fields[3]);
    row.n_f = std::stol(fields[4]);
    row.n_g = std::stol(fields[5]);
    row.cg_iters = std::stol(fields[6]);
    row.f_final = std::stod(fields[7]);
    row.stationarity = std::stod(fields[8]);
    row.excluded = fields[9] == "1" || fields[9] == "true";
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_profile_csv(const ProfileSet& profiles, std::ostream& out) {
  out << "solver,tau,rho\n";
  for (const ProfileCurve& curve : profiles.curves) {
    for (const auto& [tau, rho] : curve.points) {
      out << curve.solver << ',' << csv_double(tau) << ',' << csv_double(rho)
          << '\n';
    }
  }
}

}  // namespace asabcp

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "asabcp/problems.hpp"
#include "asabcp/solver.hpp"

namespace asabcp {

/// Projected-gradient baseline x+ = [x - t g(x)]^# with a monotone Armijo
/// backtracking on t and the same stopping rule as the main solver.
SolveReport projected_gradient_solve(const ProblemInstance& problem,
                                     const SolverConfig& config,
                                     const Vector& x0);
SolveReport projected_gradient_solve(const ProblemInstance& problem,
                                     const SolverConfig& config);

struct SolverSpec {
  std::string name;
  std::function<SolveReport(const ProblemInstance&, const SolverConfig&)> run;
};

/// The two built-in solvers: "asa-bcp" and "pg".
std::vector<SolverSpec> standard_solvers();
SolverSpec solver_by_name(const std::string& name);

struct MetricsRow {
  std::string problem;
  std::string solver;
  SolveStatus status = SolveStatus::diverged;
  double wall_time_s = 0.0;
  long n_f = 0;
  long n_g = 0;
  long cg_iters = 0;
  double f_final = 0.0;
  double stationarity = 0.0;
  bool excluded = false;
};

struct MetricsTable {
  std::vector<MetricsRow> rows;
};

/// Runs every solver on every problem. Problems may execute in parallel
/// (ASABCP_THREADS caps the fan-out when threads == 0); rows are assembled in
/// (problem, solver) order regardless of completion order. Solver failures
/// are recorded, never raised. Problems whose converged runs disagree on
/// f_final by more than 1e-3 relative have all their rows flagged excluded.
MetricsTable run_suite(const std::vector<SolverSpec>& solvers,
                       const std::vector<ProblemInstance>& problems,
                       const SolverConfig& config, int threads = 0);

enum class ProfileMetric {
  time,
  fevals,
  cg_iters,
};

const char* to_string(ProfileMetric metric);
ProfileMetric profile_metric_from_string(const std::string& name);

/// Right-continuous step function rho(tau): fraction of problems on which a
/// solver's cost is within a factor tau of the best solver's cost.
struct ProfileCurve {
  std::string solver;
  std::vector<std::pair<double, double>> points;  // (tau, rho), tau ascending
};

struct ProfileSet {
  std::vector<ProfileCurve> curves;
  long dropped_problems = 0;  // problems where every solver failed
};

/// Cost ratios r_{p,s} = cost_{p,s} / min_s cost_{p,s} per problem; failed
/// runs and excluded problems never count. Curves carry a breakpoint at every
/// distinct finite ratio.
ProfileSet performance_profile(const MetricsTable& table, ProfileMetric metric);

// CSV: header problem,solver,status,wall_time_s,n_f,n_g,cg_iters,f_final,
// stationarity,excluded; profiles as solver,tau,rho.
void write_metrics_csv(const MetricsTable& table, std::ostream& out);
MetricsTable read_metrics_csv(std::istream& in);
void write_profile_csv(const ProfileSet& profiles, std::ostream& out);

}  // namespace asabcp

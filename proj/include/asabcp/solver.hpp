#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "asabcp/active_set.hpp"
#include "asabcp/direction.hpp"
#include "asabcp/nonmonotone.hpp"
#include "asabcp/problem.hpp"

namespace asabcp {

enum class SolveStatus {
  converged,
  max_iters,
  max_fevals,
  max_time,
  line_search_failure,
  diverged,
};

const char* to_string(SolveStatus status);
SolveStatus solve_status_from_string(const std::string& name);

enum class StepChannel {
  unit_step,
  line_search,
  degenerate,
};

const char* to_string(StepChannel channel);

enum class TraceLevel {
  none,
  scalars,
  full,
};

struct SolverConfig {
  // Active-set estimate parameter (halved by the safeguard when the Stage-1
  // decrease guarantee fails).
  double eps0 = 1e-6;

  // Line search: sufficient-decrease constant in ]0,1/2[ and backtracking
  // factor in ]0,1[.
  double gamma = 1e-4;
  double delta = 0.5;
  int max_backtracks = 60;

  // Non-monotone memory window M and watchdog interval Z.
  int history_m = 99;
  int watchdog_z = 20;

  // Shrink factor for the unit-step and proximity thresholds, and their
  // initial values (non-positive means max(1, stationarity(x0))).
  double beta = 0.5;
  double delta0_unit = -1.0;
  double delta0_prox = -1.0;

  // Gradient-relatedness safeguards and the truncated CG controls. The CG
  // iteration limit is min(|N|, max_cg).
  double sigma1 = 1e-9;
  double sigma2 = 1e9;
  double forcing_cap = 0.5;
  long max_cg = 100;

  // Stopping rule |x - [x - g(x)]^#|_inf <= tol and budgets
  // (max_time_s <= 0 means unlimited).
  double tol = 1e-5;
  long max_iters = 10000;
  long max_fevals = 1000000;
  double max_time_s = 0.0;

  TraceLevel trace_level = TraceLevel::none;

  void validate() const;  // throws std::invalid_argument
};

/// One row per outer iteration. The scalar fields feed the trace CSV; the
/// vector fields are filled only at TraceLevel::full.
struct TraceRecord {
  long iter = 0;
  double f = std::numeric_limits<double>::quiet_NaN();  // f(x^k) when known
  double f_ref = 0.0;
  double stationarity = 0.0;
  Index n_lower = 0;
  Index n_upper = 0;
  Index n_nonactive = 0;
  double alpha = 0.0;
  long cg_iters = 0;
  StepChannel channel = StepChannel::degenerate;

  // Diagnostics beyond the CSV columns.
  double direction_norm = std::numeric_limits<double>::quiet_NaN();
  double delta_unit = std::numeric_limits<double>::quiet_NaN();
  double delta_prox = std::numeric_limits<double>::quiet_NaN();
  double cg_residual = std::numeric_limits<double>::quiet_NaN();
  double cg_target = std::numeric_limits<double>::quiet_NaN();
  double reduced_gradient_norm = std::numeric_limits<double>::quiet_NaN();
  double slope = std::numeric_limits<double>::quiet_NaN();
  double accepted_f = std::numeric_limits<double>::quiet_NaN();
  double f_ref_used = std::numeric_limits<double>::quiet_NaN();
  bool direction_active_zero = true;
  bool direction_grad_related = true;
  bool backtracked = false;

  // TraceLevel::full only: iterate and the partition used for the direction.
  Vector x;
  std::vector<Index> lower_active;
  std::vector<Index> upper_active;
};

struct SolveReport {
  std::string problem;
  Vector x_final;
  double f_final = std::numeric_limits<double>::quiet_NaN();
  double stationarity = std::numeric_limits<double>::quiet_NaN();
  SolveStatus status = SolveStatus::diverged;
  EvalCounters counters;
  long iterations = 0;
  int eps_halvings = 0;  // times the estimate-parameter safeguard fired
  std::vector<TraceRecord> trace;
};

/// Mutable state the two-stage iteration carries between steps; exposed for
/// the backtracking operation and its tests.
struct DriverState {
  Vector x;          // x^k
  Vector stage1;     // xt^k
  Vector direction;  // d^k
  double slope = 0.0;
  long k = 0;
  double delta_unit = 0.0;
  double delta_prox = 0.0;
  bool checkpoint_flag = true;
};

/// Restores the stored checkpoint: stage1 point, direction, slope and the
/// iteration counter k := l^j. Throws when the memory holds no checkpoint
/// point.
void backtrack_to_checkpoint(DriverState& state, const ReferenceMemory& memory);

struct BudgetClock {
  long iterations = 0;
  long n_f = 0;
  double elapsed_s = 0.0;
};

/// Stopping test: converged on stationarity <= tol, otherwise the first
/// exceeded budget, otherwise nothing (continue).
std::optional<SolveStatus> check_termination(const Vector& x, const Vector& g,
                                             const BoxBounds& bounds,
                                             const SolverConfig& config,
                                             const BudgetClock& clock);

/// Two-stage active-set solve of min f(x) over [l, u] starting from the
/// projection of x0. Per iteration: estimate the active sets at x^k, fix the
/// estimated active variables at their bounds (Stage 1), accept the move
/// outright when it is short enough, otherwise guard it against the reference
/// value; re-estimate at the moved point and build a truncated-Newton
/// direction on the non-active subspace (Stage 2); take the unit step without
/// evaluating f when the direction is short enough, otherwise run the
/// non-monotone Armijo search, backtracking to the stored checkpoint whenever
/// the objective is no better than the reference value. A watchdog forces an
/// objective check after watchdog_z iterations without one.
SolveReport solve(const ProblemInstance& problem, const SolverConfig& config,
                  const Vector& x0);
SolveReport solve(const ProblemInstance& problem, const SolverConfig& config);

}  // namespace asabcp

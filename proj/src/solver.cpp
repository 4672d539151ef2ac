#include "asabcp/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace asabcp {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::max_fevals: return "max_fevals";
    case SolveStatus::max_time: return "max_time";
    case SolveStatus::line_search_failure: return "line_search_failure";
    case SolveStatus::diverged: return "diverged";
  }
  return "unknown";
}

SolveStatus solve_status_from_string(const std::string& name) {
  for (SolveStatus s :
       {SolveStatus::converged, SolveStatus::max_iters, SolveStatus::max_fevals,
        SolveStatus::max_time, SolveStatus::line_search_failure,
        SolveStatus::diverged}) {
    if (name == to_string(s)) return s;
  }
  throw std::invalid_argument("unknown solve status: " + name);
}

const char* to_string(StepChannel channel) {
  switch (channel) {
    case StepChannel::unit_step: return "unit";
    case StepChannel::line_search: return "line_search";
    case StepChannel::degenerate: return "degenerate";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (!(eps0 > 0.0)) throw std::invalid_argument("SolverConfig: eps0 must be positive");
  if (!(gamma > 0.0 && gamma < 0.5)) throw std::invalid_argument("SolverConfig: gamma must lie in ]0,1/2[");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("SolverConfig: delta must lie in ]0,1[");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("SolverConfig: beta must lie in ]0,1[");
  if (history_m < 0) throw std::invalid_argument("SolverConfig: history window M must be nonnegative");
  if (watchdog_z < 1) throw std::invalid_argument("SolverConfig: watchdog interval Z must be at least 1");
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw std::invalid_argument("SolverConfig: sigma1 and sigma2 must be positive");
  if (!(forcing_cap > 0.0 && forcing_cap < 1.0)) throw std::invalid_argument("SolverConfig: forcing cap must lie in ]0,1[");
  if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
  if (max_iters < 0 || max_fevals < 0 || max_cg < 0 || max_backtracks < 0)
    throw std::invalid_argument("SolverConfig: budgets must be nonnegative");
}

void backtrack_to_checkpoint(DriverState& state, const ReferenceMemory& memory) {
  if (!memory.has_point()) {
    throw std::logic_error("backtrack_to_checkpoint: no checkpoint stored");
  }
  state.stage1 = memory.checkpoint_point();
  if (memory.has_direction()) {
    state.direction = memory.checkpoint_direction();
    state.slope = memory.checkpoint_slope();
  }
  state.k = memory.checkpoint_iteration();
}

std::optional<SolveStatus> check_termination(const Vector& x, const Vector& g,
                                             const BoxBounds& bounds,
                                             const SolverConfig& config,
                                             const BudgetClock& clock) {
  if (stationarity_measure(x, g, bounds) <= config.tol) {
    return SolveStatus::converged;
  }
  if (clock.iterations >= config.max_iters) return SolveStatus::max_iters;
  if (clock.n_f >= config.max_fevals) return SolveStatus::max_fevals;
  if (config.max_time_s > 0.0 && clock.elapsed_s >= config.max_time_s) {
    return SolveStatus::max_time;
  }
  return std::nullopt;
}

namespace {

double reduced_norm(const Vector& v, const std::vector<Index>& indices) {
  double sq = 0.0;
  for (Index i : indices) sq += v[i] * v[i];
  return std::sqrt(sq);
}

double reduced_dot(const Vector& a, const Vector& b,
                   const std::vector<Index>& indices) {
  double s = 0.0;
  for (Index i : indices) s += a[i] * b[i];
  return s;
}

}  // namespace

SolveReport solve(const ProblemInstance& problem, const SolverConfig& config) {
  return solve(problem, config, default_start(problem));
}

SolveReport solve(const ProblemInstance& problem, const SolverConfig& config,
                  const Vector& x0) {
  config.validate();
  const ObjectiveModel& model = problem.model;
  const BoxBounds& bounds = problem.bounds;
  if (model.dimension() != bounds.dimension()) {
    throw std::invalid_argument("solve: model/bounds dimension mismatch");
  }
  if (x0.size() != bounds.dimension()) {
    throw std::invalid_argument("solve: starting point dimension mismatch");
  }

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
  double f_x = model.value(x, counters);
  bool f_x_known = true;
  if (!std::isfinite(f_x)) {
    report.status = SolveStatus::diverged;
    report.x_final = x;
    report.f_final = f_x;
    report.stationarity = std::numeric_limits<double>::quiet_NaN();
    return report;
  }

  ReferenceMemory memory(f_x, config.history_m, x);
  EpsilonState eps{config.eps0, 0};

  Vector g = model.gradient(x, counters);
  double stationarity = g.allFinite()
                            ? stationarity_measure(x, g, bounds)
                            : std::numeric_limits<double>::quiet_NaN();

  double delta_unit = config.delta0_unit > 0.0
                          ? config.delta0_unit
                          : std::max(1.0, stationarity);
  double delta_prox = config.delta0_prox > 0.0
                          ? config.delta0_prox
                          : std::max(1.0, stationarity);
  bool checkpoint_flag = true;
  long k = 0;      // Iteration counter of the scheme; rewinds on backtracks.
  long outer = 0;  // Monotone count of executed iterations.

  ForcingSchedule schedule{config.forcing_cap};
  SolveStatus status;

  while (true) {
    if (!g.allFinite()) {
      status = SolveStatus::diverged;
      break;
    }
    if (auto stop = check_termination(
            x, g, bounds, config,
            BudgetClock{outer, counters.n_f, elapsed()})) {
      status = *stop;
      break;
    }

    TraceRecord rec;
    rec.iter = outer;
    rec.f = f_x_known ? f_x : std::numeric_limits<double>::quiet_NaN();
    rec.stationarity = stationarity;
    rec.delta_unit = delta_unit;
    rec.delta_prox = delta_prox;

    ActiveSetPartition parts = estimate_active_set(x, g, bounds, eps.epsilon);
    Vector xt = active_set_step(x, parts, bounds);
    const double stage1_norm = (xt - x).norm();
    const bool moved = stage1_norm > 0.0;
    rec.n_lower = static_cast<Index>(parts.lower_active.size());
    rec.n_upper = static_cast<Index>(parts.upper_active.size());
    rec.n_nonactive = static_cast<Index>(parts.nonactive.size());

    bool to_line_search = false;  // direct jump to the Armijo search
    bool diverged = false;
    Vector direction;
    double slope = 0.0;
    DirectionInfo dir_info;
    std::optional<double> f_xt;

    if (stage1_norm <= delta_prox) {
      delta_prox *= config.beta;  // proximity check: accept without f
    } else {
      if (!f_x_known) {
        f_x = model.value(x, counters);
        f_x_known = true;
        if (!std::isfinite(f_x)) {
          status = SolveStatus::diverged;
          break;
        }
      }
      if (f_x >= memory.reference_value() && memory.has_direction()) {
        // Objective check failed: resume the search from the checkpoint.
        xt = memory.checkpoint_point();
        direction = memory.checkpoint_direction();
        slope = memory.checkpoint_slope();
        k = memory.checkpoint_iteration();
        to_line_search = true;
        rec.backtracked = true;
      }
      // Before the first full checkpoint the stored point carries no
      // direction; the test can only trip at x^0 itself, so proceed.
    }

    Vector x_next;
    double alpha = 0.0;
    StepChannel channel = StepChannel::degenerate;
    bool f_next_known = false;
    double f_next = 0.0;

    if (!to_line_search) {
      Vector g_xt_storage;
      const bool xt_is_x = !moved;
      if (!xt_is_x) {
        g_xt_storage = model.gradient(xt, counters);
        if (!g_xt_storage.allFinite()) {
          status = SolveStatus::diverged;
          diverged = true;
        }
      }
      if (diverged) break;
      const Vector& g_xt = xt_is_x ? g : g_xt_storage;

      ActiveSetPartition parts_t =
          estimate_active_set(xt, g_xt, bounds, eps.epsilon);
      rec.n_lower = static_cast<Index>(parts_t.lower_active.size());
      rec.n_upper = static_cast<Index>(parts_t.upper_active.size());
      rec.n_nonactive = static_cast<Index>(parts_t.nonactive.size());
      if (config.trace_level == TraceLevel::full) {
        rec.lower_active = parts_t.lower_active;
        rec.upper_active = parts_t.upper_active;
      }
      const double g_reduced = reduced_norm(g_xt, parts_t.nonactive);
      rec.reduced_gradient_norm = g_reduced;

      if (parts_t.nonactive.empty() || g_reduced == 0.0) {
        // Degenerate channel: nothing to minimize over, hold the Stage-1
        // point and re-estimate next iteration.
        x_next = xt;
        alpha = 0.0;
        channel = StepChannel::degenerate;
        if (xt_is_x && f_x_known) {
          f_next = f_x;
          f_next_known = true;
        }
      } else {
        auto eval_xt = [&]() -> double {
          if (f_xt) return *f_xt;
          double v = (xt_is_x && f_x_known) ? f_x : model.value(xt, counters);
          f_xt = v;
          return v;
        };

        if (checkpoint_flag) {
          const double v = eval_xt();
          if (!std::isfinite(v)) {
            status = SolveStatus::diverged;
            break;
          }
          memory.push_checkpoint(v, k, xt);
          checkpoint_flag = false;
          if (f_x_known && moved) {
            eps = epsilon_safeguard(eps, f_x, v, stage1_norm * stage1_norm);
          }
        }

        const long cg_cap =
            std::min<long>(static_cast<long>(parts_t.nonactive.size()),
                           config.max_cg);
        auto hessvec_at_xt = [&](const Vector& v) {
          return model.hessvec(xt, g_xt, v, counters);
        };
        dir_info = reduced_newton(g_xt, parts_t, hessvec_at_xt, schedule,
                                  cg_cap, config.sigma1, config.sigma2);
        counters.cg_iters += dir_info.cg_iterations;
        direction = dir_info.direction;
        slope = reduced_dot(g_xt, direction, parts_t.nonactive);
        if (memory.checkpoint_iteration() == k && !memory.has_direction()) {
          memory.set_checkpoint_direction(direction, slope);
        }
        rec.cg_iters = dir_info.cg_iterations;
        rec.cg_residual = dir_info.final_residual_norm;
        rec.cg_target = dir_info.residual_target;
        rec.direction_norm = direction.norm();
        rec.direction_active_zero = true;
        for (Index i : parts_t.lower_active) {
          if (direction[i] != 0.0) rec.direction_active_zero = false;
        }
        for (Index i : parts_t.upper_active) {
          if (direction[i] != 0.0) rec.direction_active_zero = false;
        }
        rec.direction_grad_related =
            slope <= -config.sigma1 * g_reduced * g_reduced &&
            reduced_norm(direction, parts_t.nonactive) <=
                config.sigma2 * g_reduced;

        // Watchdog: force an objective check after watchdog_z iterations
        // without one.
        if (k >= memory.checkpoint_iteration() + config.watchdog_z) {
          const double v = eval_xt();
          if (!std::isfinite(v)) {
            status = SolveStatus::diverged;
            break;
          }
          if (f_x_known && moved) {
            eps = epsilon_safeguard(eps, f_x, v, stage1_norm * stage1_norm);
          }
          if (v >= memory.reference_value()) {
            xt = memory.checkpoint_point();
            direction = memory.checkpoint_direction();
            slope = memory.checkpoint_slope();
            k = memory.checkpoint_iteration();
            to_line_search = true;
            rec.backtracked = true;
          } else {
            memory.push_checkpoint(v, k, xt, direction, slope);
          }
        }

        if (!to_line_search) {
          if (rec.direction_norm <= delta_unit) {
            // Unit step accepted without evaluating the objective.
            x_next = project(xt + direction, bounds);
            alpha = 1.0;
            delta_unit *= config.beta;
            channel = StepChannel::unit_step;
          } else {
            if (k != memory.checkpoint_iteration()) {
              const double v = eval_xt();
              if (!std::isfinite(v)) {
                status = SolveStatus::diverged;
                break;
              }
              if (f_x_known && moved) {
                eps = epsilon_safeguard(eps, f_x, v, stage1_norm * stage1_norm);
              }
              if (v >= memory.reference_value()) {
                xt = memory.checkpoint_point();
                direction = memory.checkpoint_direction();
                slope = memory.checkpoint_slope();
                k = memory.checkpoint_iteration();
                rec.backtracked = true;
              } else {
                memory.push_checkpoint(v, k, xt, direction, slope);
              }
            }
            to_line_search = true;
          }
        }
      }
    }

    if (to_line_search) {
      rec.slope = slope;
      rec.f_ref_used = memory.reference_value();
      const LineSearchResult ls = armijo_nonmonotone(
          model, bounds, xt, direction, slope, memory.reference_value(),
          config.gamma, config.delta, config.max_backtracks, counters);
      if (!ls.success) {
        status = SolveStatus::line_search_failure;
        break;
      }
      x_next = ls.x;
      alpha = ls.alpha;
      f_next = ls.f;
      f_next_known = true;
      checkpoint_flag = true;
      channel = StepChannel::line_search;
      rec.accepted_f = ls.f;
    }

    x = std::move(x_next);
    f_x = f_next;
    f_x_known = f_next_known;
    k += 1;
    outer += 1;

    g = model.gradient(x, counters);
    stationarity = g.allFinite() ? stationarity_measure(x, g, bounds)
                                 : std::numeric_limits<double>::quiet_NaN();

    rec.alpha = alpha;
    rec.channel = channel;
    rec.f_ref = memory.reference_value();
    if (config.trace_level == TraceLevel::full) {
      rec.x = x;
    }
    if (config.trace_level != TraceLevel::none) {
      report.trace.push_back(std::move(rec));
    }
  }

  if (!f_x_known) {
    f_x = model.value(x, counters);
  }
  report.x_final = std::move(x);
  report.f_final = f_x;
  report.stationarity = stationarity;
  report.status = status;
  report.iterations = outer;
  report.eps_halvings = eps.halvings;
  return report;
}

}  // namespace asabcp

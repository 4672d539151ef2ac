#pragma once

#include <deque>

#include "asabcp/problem.hpp"

namespace asabcp {

/// Reference value and checkpoint bookkeeping for the non-monotone line
/// search. The reference value f_R is the maximum of the last min(j,M)+1
/// checkpoint objective values; the checkpoint stores the point and direction
/// the solver backtracks to when the objective exceeds f_R.
class ReferenceMemory {
public:
  /// Seeds f_R with f(x0). The checkpoint point is x0 with no direction
  /// attached yet; the checkpoint counter j starts at -1.
  ReferenceMemory(double f0, int window, Vector x0 = Vector());

  /// Registers checkpoint j+1 at iteration k: the window gains f_value
  /// (evicting the oldest entry beyond M+1) and f_R becomes the window
  /// maximum. Point and direction replace the stored copies; pass the
  /// direction later through set_checkpoint_direction when it is not known
  /// yet.
  void push_checkpoint(double f_value, long iteration, Vector point);
  void push_checkpoint(double f_value, long iteration, Vector point,
                       Vector direction, double slope);

  /// Attaches the direction (and its slope g' d) to the latest checkpoint.
  void set_checkpoint_direction(Vector direction, double slope);

  double reference_value() const { return reference_; }
  long checkpoint_count() const { return count_; }         // j
  long checkpoint_iteration() const { return iteration_; } // l^j
  int window() const { return window_; }

  bool has_point() const { return point_.size() > 0; }
  bool has_direction() const { return has_direction_; }
  const Vector& checkpoint_point() const { return point_; }
  const Vector& checkpoint_direction() const { return direction_; }
  double checkpoint_slope() const { return slope_; }

private:
  std::deque<double> values_;
  double reference_;
  long count_ = -1;
  long iteration_ = -1;
  int window_;
  Vector point_;
  Vector direction_;
  double slope_ = 0.0;
  bool has_direction_ = false;
};

struct LineSearchResult {
  bool success = false;
  double alpha = 0.0;
  Vector x;
  double f = 0.0;
  int backtracks = 0;
};

/// Non-monotone projected Armijo search: alpha = delta^nu with nu the
/// smallest nonnegative integer such that
///   f([base + delta^nu d]^#) <= f_reference + gamma delta^nu slope,
/// where slope = g(base)' d < 0. Every trial point is projected before
/// evaluation and counts one objective evaluation. Fails (success = false)
/// after max_backtracks rejected trials.
LineSearchResult armijo_nonmonotone(const ObjectiveModel& model,
                                    const BoxBounds& bounds, const Vector& base,
                                    const Vector& direction, double slope,
                                    double f_reference, double gamma,
                                    double delta, int max_backtracks,
                                    EvalCounters& counters);

}  // namespace asabcp

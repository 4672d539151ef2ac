#pragma once

#include <vector>

#include "asabcp/problem.hpp"

namespace asabcp {

/// First-order multiplier estimates built from the gradient and the squared
/// distances to the bounds. They satisfy g(x) - lambda(x) + mu(x) = 0
/// componentwise.
struct MultiplierEstimates {
  Vector lambda;
  Vector mu;
};

MultiplierEstimates multipliers(const Vector& x, const Vector& g,
                                const BoxBounds& bounds);

/// Disjoint split of {0,...,n-1} into variables estimated active at the
/// lower bound, active at the upper bound, and non-active.
struct ActiveSetPartition {
  std::vector<Index> lower_active;
  std::vector<Index> upper_active;
  std::vector<Index> nonactive;

  Index dimension() const {
    return static_cast<Index>(lower_active.size() + upper_active.size() +
                              nonactive.size());
  }
};

/// Active-set estimate at a feasible point:
///   i is lower-active  iff  l_i <= x_i <= l_i + eps lambda_i(x) and g_i > 0,
///   i is upper-active  iff  u_i - eps mu_i(x) <= x_i <= u_i and g_i < 0,
/// everything else is non-active. A coordinate whose bound is infinite never
/// enters the corresponding active set.
ActiveSetPartition estimate_active_set(const Vector& x, const Vector& g,
                                       const BoxBounds& bounds, double epsilon);

/// Stage-1 move: fix estimated active variables at their bounds, keep the
/// non-active ones.
Vector active_set_step(const Vector& x, const ActiveSetPartition& partition,
                       const BoxBounds& bounds);

/// Projected-gradient optimality measure |x - [x - g(x)]^#|_inf. Zero exactly
/// at stationary points.
double stationarity_measure(const Vector& x, const Vector& g,
                            const BoxBounds& bounds);

/// Stationarity test through the partition: max{l_i - x_i, -g_i} vanishes on
/// the lower-active set, max{x_i - u_i, g_i} on the upper-active set, and g_i
/// on the non-active set, each within tol.
bool partition_stationarity_check(const Vector& x, const Vector& g,
                                  const ActiveSetPartition& partition,
                                  const BoxBounds& bounds, double tol);

/// The estimate parameter eps together with the number of times it has been
/// halved. eps never grows during a solve.
struct EpsilonState {
  double epsilon = 1e-6;
  int halvings = 0;
};

/// Halve eps when a nonzero Stage-1 move failed to deliver the decrease
///   f(xt) - f(x) <= -|x - xt|^2 / (2 eps)
/// it guarantees for a valid eps (checked with absolute slack abs_tol).
EpsilonState epsilon_safeguard(EpsilonState state, double f_x, double f_xtilde,
                               double step_norm_sq, double abs_tol = 1e-10);

}  // namespace asabcp

#pragma once

#include <functional>

#include "asabcp/active_set.hpp"

namespace asabcp {

enum class TruncationReason {
  residual_met,
  max_iters,
  negative_curvature,
  zero_gradient,
};

const char* to_string(TruncationReason reason);

/// Search direction over the full space. Estimated active coordinates are
/// exactly zero; the non-active block is gradient-related:
///   d_N' g_N <= -sigma1 |g_N|^2   and   |d_N| <= sigma2 |g_N|.
struct DirectionInfo {
  Vector direction;
  long cg_iterations = 0;
  double final_residual_norm = 0.0;
  bool fallback_used = false;
  TruncationReason truncation_reason = TruncationReason::zero_gradient;
  /// |g_N| the direction was computed for and the residual target
  /// eta(|g_N|) |g_N| it was truncated against.
  double reduced_gradient_norm = 0.0;
  double residual_target = 0.0;
};

/// Forcing-term schedule for the truncated conjugate gradient solve:
/// eta = min(cap, sqrt(|g_N|)), so the residual-over-gradient ratio is driven
/// to zero as the solve converges.
struct ForcingSchedule {
  double cap = 0.5;

  double tolerance(double reduced_gradient_norm) const;
};

/// Returns d_N unchanged when it already satisfies the slope and norm
/// conditions above, and -g_N otherwise.
Vector enforce_gradient_related(const Vector& d_reduced, const Vector& g_reduced,
                                double sigma1, double sigma2);

/// Full-space Hessian-vector product at a fixed point.
using HessVecOperator = std::function<Vector(const Vector&)>;

/// Truncated-Newton direction on the non-active subspace: conjugate gradient
/// on H_NN d_N = -g_N, stopped at the forcing-term residual, at max_cg
/// iterations, or at the first direction of non-positive curvature (keeping
/// the iterate accumulated so far, steepest descent if that is zero). The
/// result is safeguarded by enforce_gradient_related and scattered into the
/// full space with zeros on the active coordinates.
DirectionInfo reduced_newton(const Vector& gradient,
                             const ActiveSetPartition& partition,
                             const HessVecOperator& hessvec,
                             const ForcingSchedule& schedule, long max_cg,
                             double sigma1, double sigma2);

}  // namespace asabcp

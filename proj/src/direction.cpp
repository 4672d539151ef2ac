#include "asabcp/direction.hpp"

#include <cmath>
#include <stdexcept>

namespace asabcp {

const char* to_string(TruncationReason reason) {
  switch (reason) {
    case TruncationReason::residual_met: return "residual_met";
    case TruncationReason::max_iters: return "max_iters";
    case TruncationReason::negative_curvature: return "negative_curvature";
    case TruncationReason::zero_gradient: return "zero_gradient";
  }
  return "unknown";
}

double ForcingSchedule::tolerance(double reduced_gradient_norm) const {
  return std::min(cap, std::sqrt(reduced_gradient_norm));
}

Vector enforce_gradient_related(const Vector& d_reduced, const Vector& g_reduced,
                                double sigma1, double sigma2) {
  const double g_norm = g_reduced.norm();
  if (g_norm == 0.0) {
    throw std::invalid_argument("enforce_gradient_related: zero reduced gradient");
  }
  const bool slope_ok = d_reduced.dot(g_reduced) <= -sigma1 * g_norm * g_norm;
  const bool norm_ok = d_reduced.norm() <= sigma2 * g_norm;
  if (slope_ok && norm_ok) return d_reduced;
  return -g_reduced;
}

namespace {

Vector gather(const Vector& full, const std::vector<Index>& indices) {
  Vector out(static_cast<Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) out[static_cast<Index>(k)] = full[indices[k]];
  return out;
}

}  // namespace

DirectionInfo reduced_newton(const Vector& gradient,
                             const ActiveSetPartition& partition,
                             const HessVecOperator& hessvec,
                             const ForcingSchedule& schedule, long max_cg,
                             double sigma1, double sigma2) {
  const auto& free_set = partition.nonactive;
  if (free_set.empty()) {
    throw std::invalid_argument("reduced_newton: empty non-active set");
  }
  const Index m = static_cast<Index>(free_set.size());
  const Vector g_reduced = gather(gradient, free_set);
  const double g_norm = g_reduced.norm();
  if (g_norm == 0.0) {
    throw std::invalid_argument("reduced_newton: zero reduced gradient");
  }

  DirectionInfo info;
  info.reduced_gradient_norm = g_norm;
  info.residual_target = schedule.tolerance(g_norm) * g_norm;
  info.truncation_reason = TruncationReason::max_iters;

  Vector d = Vector::Zero(m);
  Vector r = -g_reduced;  // residual of H_NN d = -g_N at d
  Vector p = r;
  double rr = r.squaredNorm();
  Vector scratch = Vector::Zero(gradient.size());

  for (long iter = 1; iter <= max_cg; ++iter) {
    scratch.setZero();
    for (Index k = 0; k < m; ++k) scratch[free_set[static_cast<std::size_t>(k)]] = p[k];
    const Vector q = gather(hessvec(scratch), free_set);
    const double curvature = p.dot(q);
    info.cg_iterations = iter;
    if (curvature <= 0.0) {
      info.truncation_reason = TruncationReason::negative_curvature;
      if (d.isZero(0.0)) {
        d = -g_reduced;
        info.fallback_used = true;
      }
      break;
    }
    const double step = rr / curvature;
    d += step * p;
    r -= step * q;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= info.residual_target) {
      info.truncation_reason = TruncationReason::residual_met;
      rr = rr_next;
      break;
    }
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  info.final_residual_norm = r.norm();

  const Vector safeguarded = enforce_gradient_related(d, g_reduced, sigma1, sigma2);
  if (safeguarded != d) {
    info.fallback_used = true;
  }

  info.direction = Vector::Zero(gradient.size());
  for (Index k = 0; k < m; ++k) {
    info.direction[free_set[static_cast<std::size_t>(k)]] = safeguarded[k];
  }
  return info;
}

}  // namespace asabcp

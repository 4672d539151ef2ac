#include "asabcp/active_set.hpp"

#include <cmath>
#include <stdexcept>

namespace asabcp {

namespace {

void require_same_dim(const Vector& x, const Vector& g, const BoxBounds& bounds,
                      const char* what) {
  if (x.size() != bounds.dimension() || g.size() != bounds.dimension()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

MultiplierEstimates multipliers(const Vector& x, const Vector& g,
                                const BoxBounds& bounds) {
  require_same_dim(x, g, bounds, "multipliers");
  const Index n = x.size();
  MultiplierEstimates out{Vector(n), Vector(n)};
  for (Index i = 0; i < n; ++i) {
    const double dl = bounds.lower()[i] - x[i];
    const double du = bounds.upper()[i] - x[i];
    const bool l_inf = std::isinf(bounds.lower()[i]);
    const bool u_inf = std::isinf(bounds.upper()[i]);
    double wl;  // weight on lambda, one-sided limit when a bound is infinite
    if (l_inf && u_inf) {
      wl = 0.5;
    } else if (u_inf) {
      wl = 1.0;
    } else if (l_inf) {
      wl = 0.0;
    } else {
      wl = du * du / (dl * dl + du * du);
    }
    out.lambda[i] = wl * g[i];
    out.mu[i] = -(1.0 - wl) * g[i];
  }
  return out;
}

ActiveSetPartition estimate_active_set(const Vector& x, const Vector& g,
                                       const BoxBounds& bounds, double epsilon) {
  require_same_dim(x, g, bounds, "estimate_active_set");
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("estimate_active_set: epsilon must be positive");
  }
  const MultiplierEstimates m = multipliers(x, g, bounds);
  ActiveSetPartition parts;
  const Index n = x.size();
  for (Index i = 0; i < n; ++i) {
    const double l = bounds.lower()[i];
    const double u = bounds.upper()[i];
    if (!std::isinf(l) && g[i] > 0.0 && x[i] >= l &&
        x[i] <= l + epsilon * m.lambda[i]) {
      parts.lower_active.push_back(i);
    } else if (!std::isinf(u) && g[i] < 0.0 && x[i] <= u &&
               x[i] >= u - epsilon * m.mu[i]) {
      parts.upper_active.push_back(i);
    } else {
      parts.nonactive.push_back(i);
    }
  }
  return parts;
}

Vector active_set_step(const Vector& x, const ActiveSetPartition& partition,
                       const BoxBounds& bounds) {
  if (x.size() != bounds.dimension() || partition.dimension() != x.size()) {
    throw std::invalid_argument("active_set_step: dimension mismatch");
  }
  Vector out = x;
  for (Index i : partition.lower_active) out[i] = bounds.lower()[i];
  for (Index i : partition.upper_active) out[i] = bounds.upper()[i];
  return out;
}

double stationarity_measure(const Vector& x, const Vector& g,
                            const BoxBounds& bounds) {
  require_same_dim(x, g, bounds, "stationarity_measure");
  return (x - project(x - g, bounds)).lpNorm<Eigen::Infinity>();
}

bool partition_stationarity_check(const Vector& x, const Vector& g,
                                  const ActiveSetPartition& partition,
                                  const BoxBounds& bounds, double tol) {
  require_same_dim(x, g, bounds, "partition_stationarity_check");
  for (Index i : partition.lower_active) {
    if (std::abs(std::max(bounds.lower()[i] - x[i], -g[i])) > tol) return false;
  }
  for (Index i : partition.upper_active) {
    if (std::abs(std::max(x[i] - bounds.upper()[i], g[i])) > tol) return false;
  }
  for (Index i : partition.nonactive) {
    if (std::abs(g[i]) > tol) return false;
  }
  return true;
}

EpsilonState epsilon_safeguard(EpsilonState state, double f_x, double f_xtilde,
                               double step_norm_sq, double abs_tol) {
  if (step_norm_sq < 0.0) {
    throw std::invalid_argument("epsilon_safeguard: negative squared norm");
  }
  if (step_norm_sq > 0.0 &&
      f_xtilde - f_x > -step_norm_sq / (2.0 * state.epsilon) + abs_tol &&
      state.epsilon * 0.5 > 0.0) {  // keep epsilon strictly positive
    state.epsilon *= 0.5;
    ++state.halvings;
  }
  return state;
}

}  // namespace asabcp

#include "asabcp/nonmonotone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace asabcp {

ReferenceMemory::ReferenceMemory(double f0, int window, Vector x0)
    : reference_(f0), window_(window), point_(std::move(x0)) {
  if (window_ < 0) {
    throw std::invalid_argument("ReferenceMemory: window must be nonnegative");
  }
}

void ReferenceMemory::push_checkpoint(double f_value, long iteration,
                                      Vector point) {
  if (!std::isfinite(f_value)) {
    throw std::invalid_argument("ReferenceMemory: non-finite objective value");
  }
  ++count_;
  iteration_ = iteration;
  values_.push_back(f_value);
  // The window keeps the last min(j,M)+1 checkpoint values; the seed value
  // only backs the reference before the first checkpoint.
  while (values_.size() > static_cast<std::size_t>(window_) + 1) {
    values_.pop_front();
  }
  reference_ = *std::max_element(values_.begin(), values_.end());
  point_ = std::move(point);
  direction_ = Vector();
  slope_ = 0.0;
  has_direction_ = false;
}

void ReferenceMemory::push_checkpoint(double f_value, long iteration,
                                      Vector point, Vector direction,
                                      double slope) {
  push_checkpoint(f_value, iteration, std::move(point));
  set_checkpoint_direction(std::move(direction), slope);
}

void ReferenceMemory::set_checkpoint_direction(Vector direction, double slope) {
  direction_ = std::move(direction);
  slope_ = slope;
  has_direction_ = true;
}

LineSearchResult armijo_nonmonotone(const ObjectiveModel& model,
                                    const BoxBounds& bounds, const Vector& base,
                                    const Vector& direction, double slope,
                                    double f_reference, double gamma,
                                    double delta, int max_backtracks,
                                    EvalCounters& counters) {
  if (!(slope < 0.0)) {
    throw std::invalid_argument("armijo_nonmonotone: slope must be negative");
  }
  if (!(gamma > 0.0 && gamma < 0.5)) {
    throw std::invalid_argument("armijo_nonmonotone: gamma must lie in ]0,1/2[");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("armijo_nonmonotone: delta must lie in ]0,1[");
  }

  LineSearchResult result;
  double alpha = 1.0;
  for (int nu = 0; nu <= max_backtracks; ++nu) {
    Vector trial = project(base + alpha * direction, bounds);
    const double f_trial = model.value(trial, counters);
    if (std::isfinite(f_trial) &&
        f_trial <= f_reference + gamma * alpha * slope) {
      result.success = true;
      result.alpha = alpha;
      result.x = std::move(trial);
      result.f = f_trial;
      result.backtracks = nu;
      return result;
    }
    alpha *= delta;
  }
  result.backtracks = max_backtracks + 1;
  return result;
}

}  // namespace asabcp

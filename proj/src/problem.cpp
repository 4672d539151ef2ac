#include "asabcp/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace asabcp {

namespace {

void require_dimension(const Vector& v, Index n, const char* what) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

BoxBounds::BoxBounds(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() < 1) {
    throw std::invalid_argument("BoxBounds: dimension must be at least 1");
  }
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("BoxBounds: lower/upper dimension mismatch");
  }
  for (Index i = 0; i < lower_.size(); ++i) {
    if (std::isnan(lower_[i]) || std::isnan(upper_[i])) {
      throw std::invalid_argument("BoxBounds: NaN bound");
    }
    if (!(lower_[i] < upper_[i])) {
      throw std::invalid_argument("BoxBounds: lower bound must be strictly below upper bound");
    }
  }
}

bool BoxBounds::contains(const Vector& x) const {
  require_dimension(x, dimension(), "BoxBounds::contains");
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower_[i] || x[i] > upper_[i]) return false;
  }
  return true;
}

Vector project(const Vector& x, const BoxBounds& bounds) {
  require_dimension(x, bounds.dimension(), "project");
  return x.cwiseMax(bounds.lower()).cwiseMin(bounds.upper());
}

ObjectiveModel::ObjectiveModel(Index dimension, ValueFn value, GradientFn gradient,
                               HessVecFn hessvec)
    : dimension_(dimension),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessvec_(std::move(hessvec)) {
  if (dimension_ < 1) {
    throw std::invalid_argument("ObjectiveModel: dimension must be at least 1");
  }
  if (!value_ || !gradient_) {
    throw std::invalid_argument("ObjectiveModel: value and gradient callbacks are required");
  }
}

double ObjectiveModel::value(const Vector& x, EvalCounters& counters) const {
  require_dimension(x, dimension_, "ObjectiveModel::value");
  ++counters.n_f;
  return value_(x);
}

Vector ObjectiveModel::gradient(const Vector& x, EvalCounters& counters) const {
  require_dimension(x, dimension_, "ObjectiveModel::gradient");
  ++counters.n_g;
  return gradient_(x);
}

Vector ObjectiveModel::hessvec(const Vector& x, const Vector& v,
                               EvalCounters& counters) const {
  if (hessvec_) {
    require_dimension(x, dimension_, "ObjectiveModel::hessvec");
    require_dimension(v, dimension_, "ObjectiveModel::hessvec");
    ++counters.n_hv;
    return hessvec_(x, v);
  }
  return hessvec_fd(*this, x, v, counters);
}

Vector ObjectiveModel::hessvec(const Vector& x, const Vector& gradient_at_x,
                               const Vector& v, EvalCounters& counters) const {
  if (hessvec_) {
    return hessvec(x, v, counters);
  }
  return hessvec_fd(*this, x, gradient_at_x, v, counters);
}

namespace {

double fd_step(const Vector& x, const Vector& v) {
  const double v_inf = v.lpNorm<Eigen::Infinity>();
  if (v_inf == 0.0) {
    throw std::invalid_argument("hessvec_fd: zero direction vector");
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return std::sqrt(eps) * (1.0 + x.lpNorm<Eigen::Infinity>()) / v_inf;
}

}  // namespace

Vector hessvec_fd(const ObjectiveModel& model, const Vector& x, const Vector& v,
                  EvalCounters& counters) {
  const Vector g0 = model.gradient(x, counters);
  return hessvec_fd(model, x, g0, v, counters);
}

Vector hessvec_fd(const ObjectiveModel& model, const Vector& x,
                  const Vector& gradient_at_x, const Vector& v,
                  EvalCounters& counters) {
  const double h = fd_step(x, v);
  const Vector g1 = model.gradient(x + h * v, counters);
  ++counters.n_hv;
  return (g1 - gradient_at_x) / h;
}

Vector default_start(const ProblemInstance& problem) {
  return project(Vector::Zero(problem.bounds.dimension()), problem.bounds);
}

}  // namespace asabcp

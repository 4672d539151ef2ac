#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <string>

namespace asabcp {

using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Feasible box [l, u]. Entries of l may be -inf and entries of u +inf,
/// but l_i < u_i must hold strictly for every coordinate.
class BoxBounds {
public:
  BoxBounds(Vector lower, Vector upper);

  Index dimension() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

  bool contains(const Vector& x) const;

private:
  Vector lower_;
  Vector upper_;
};

/// Componentwise clamp of x onto [l, u]. Idempotent; identity on feasible
/// points.
Vector project(const Vector& x, const BoxBounds& bounds);

/// Work counters owned by a single solve.
struct EvalCounters {
  long n_f = 0;
  long n_g = 0;
  long n_hv = 0;
  long cg_iters = 0;
};

/// Smooth objective accessed through callbacks. The Hessian is only ever
/// used through products; when no exact product is supplied a forward
/// finite difference of the gradient is used instead.
class ObjectiveModel {
public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;
  using HessVecFn = std::function<Vector(const Vector&, const Vector&)>;

  ObjectiveModel(Index dimension, ValueFn value, GradientFn gradient,
                 HessVecFn hessvec = nullptr);

  Index dimension() const { return dimension_; }
  bool has_exact_hessvec() const { return static_cast<bool>(hessvec_); }

  double value(const Vector& x, EvalCounters& counters) const;
  Vector gradient(const Vector& x, EvalCounters& counters) const;

  /// H(x) v, exact if available, finite-difference otherwise. The overload
  /// taking the gradient at x avoids re-evaluating it in the
  /// finite-difference path.
  Vector hessvec(const Vector& x, const Vector& v, EvalCounters& counters) const;
  Vector hessvec(const Vector& x, const Vector& gradient_at_x, const Vector& v,
                 EvalCounters& counters) const;

private:
  Index dimension_;
  ValueFn value_;
  GradientFn gradient_;
  HessVecFn hessvec_;
};

/// Forward-difference Hessian-vector product
///   (g(x + h v) - g(x)) / h,  h = sqrt(machine eps) (1 + |x|_inf) / |v|_inf.
/// Throws on a zero direction.
Vector hessvec_fd(const ObjectiveModel& model, const Vector& x, const Vector& v,
                  EvalCounters& counters);
Vector hessvec_fd(const ObjectiveModel& model, const Vector& x,
                  const Vector& gradient_at_x, const Vector& v,
                  EvalCounters& counters);

struct KnownOptimum {
  Vector x;
  double f = 0.0;
};

struct ProblemInstance {
  ObjectiveModel model;
  BoxBounds bounds;
  std::string name;
  std::optional<KnownOptimum> known_optimum;
};

/// Canonical starting point for a problem: the projection of the origin.
Vector default_start(const ProblemInstance& problem);

}  // namespace asabcp

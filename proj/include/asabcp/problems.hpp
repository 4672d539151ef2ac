#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "asabcp/problem.hpp"

namespace asabcp {

/// Box-constrained quadratic 1/2 x'Qx + c'x with Q given by upper-triangle
/// triplets (i <= j, value mirrored below the diagonal).
struct QpTriplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

struct QpData {
  Index n = 0;
  std::vector<QpTriplet> upper_triangle;
  Vector linear;
  Vector lower;
  Vector upper;

  Eigen::MatrixXd dense() const;
};

/// Wraps QpData into a ProblemInstance with exact gradient and
/// Hessian-vector product. No optimum is attached.
ProblemInstance make_qp_instance(const QpData& data, std::string name);

/// Global optimum of a box-constrained QP by enumeration of all 3^n
/// lower/upper/free assignments with a KKT sign check on each candidate.
/// Exact ground truth for small n; throws for n > max_n.
KnownOptimum qp_optimum_by_enumeration(const QpData& data, Index max_n = 14);

/// Independent fallback oracle: a long projected-gradient run down to the
/// given stationarity.
KnownOptimum qp_optimum_by_projected_gradient(const QpData& data, double tol,
                                              long max_iters);

/// Seeded random QP: Q = R'DR with orthogonal R and log-spaced spectrum in
/// [1, cond]; the box cuts roughly a third of the coordinates of the
/// unconstrained minimizer. known_optimum is computed by enumeration for
/// n <= 12 and by the projected-gradient oracle otherwise.
ProblemInstance generate_random_qp(Index n, std::uint64_t seed, double cond);

/// Seeded strictly convex QP whose optimum is planted through the KKT
/// conditions: n_lower coordinates active at the lower bound and n_upper at
/// the upper bound, all with strictly positive multipliers (strict
/// complementarity), the rest strictly interior.
ProblemInstance generate_planted_qp(Index n, std::uint64_t seed, double cond,
                                    Index n_lower, Index n_upper);

/// Named built-in problems ("rosenbrock", "sphere-shifted",
/// "nonconvex-quad", "qp-random"). Throws listing the registry for unknown
/// names.
ProblemInstance builtin(const std::string& name, Index n,
                        std::uint64_t seed = 1);

struct RegistryEntry {
  std::string name;
  std::string description;
};

const std::vector<RegistryEntry>& problem_registry();

/// The default benchmark suite: 30 problems with n in {50, 200}.
std::vector<ProblemInstance> default_suite();

/// Error raised by the QP file parser; line is 1-based.
class ParseError : public std::runtime_error {
public:
  ParseError(long line, const std::string& message);
  long line() const { return line_; }

private:
  long line_ = 0;
};

/// Line-oriented QP text format:
///   qp 1
///   n <int>
///   Q <nnz>      followed by nnz lines "<i> <j> <value>", 0-based, i <= j
///   c <n reals>
///   l <n reals>
///   u <n reals>  ("-inf"/"inf" allowed in bounds)
/// '#' starts a comment.
QpData read_qp(std::istream& in);
QpData read_qp_file(const std::string& path);
void write_qp(const QpData& data, std::ostream& out);
void write_qp_file(const QpData& data, const std::string& path);

/// Loads a QP file as a ProblemInstance named after the path.
ProblemInstance load_qp(const std::string& path);

}  // namespace asabcp

#include "asabcp/problems.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Householder>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

namespace asabcp {

Eigen::MatrixXd QpData::dense() const {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (const QpTriplet& t : upper_triangle) {
    q(t.row, t.col) = t.value;
    q(t.col, t.row) = t.value;
  }
  return q;
}

namespace {

std::vector<QpTriplet> dense_to_triplets(const Eigen::MatrixXd& q) {
  std::vector<QpTriplet> triplets;
  triplets.reserve(static_cast<std::size_t>(q.rows()) *
                   (static_cast<std::size_t>(q.rows()) + 1) / 2);
  for (Index i = 0; i < q.rows(); ++i) {
    for (Index j = i; j < q.cols(); ++j) {
      if (q(i, j) != 0.0) triplets.push_back({i, j, q(i, j)});
    }
  }
  return triplets;
}

ObjectiveModel qp_model(std::shared_ptr<const Eigen::MatrixXd> q,
                        std::shared_ptr<const Vector> c) {
  const Index n = q->rows();
  return ObjectiveModel(
      n,
      [q, c](const Vector& x) {
        return 0.5 * x.dot(*q * x) + c->dot(x);
      },
      [q, c](const Vector& x) -> Vector { return *q * x + *c; },
      [q](const Vector&, const Vector& v) -> Vector { return *q * v; });
}

/// Orthogonal matrix from the QR factorization of a seeded Gaussian matrix.
Eigen::MatrixXd random_orthogonal(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ();
}

Eigen::MatrixXd spd_matrix(Index n, double cond, std::mt19937_64& rng) {
  const Eigen::MatrixXd r = random_orthogonal(n, rng);
  Vector d(n);
  for (Index i = 0; i < n; ++i) {
    d[i] = n > 1 ? std::exp(std::log(cond) * static_cast<double>(i) /
                            static_cast<double>(n - 1))
                 : 1.0;
  }
  Eigen::MatrixXd q = r.transpose() * d.asDiagonal() * r;
  return 0.5 * (q + q.transpose());
}

}  // namespace

ProblemInstance make_qp_instance(const QpData& data, std::string name) {
  if (data.n < 1 || data.linear.size() != data.n ||
      data.lower.size() != data.n || data.upper.size() != data.n) {
    throw std::invalid_argument("make_qp_instance: inconsistent dimensions");
  }
  auto q = std::make_shared<const Eigen::MatrixXd>(data.dense());
  auto c = std::make_shared<const Vector>(data.linear);
  return ProblemInstance{qp_model(q, c), BoxBounds(data.lower, data.upper),
                         std::move(name), std::nullopt};
}

KnownOptimum qp_optimum_by_enumeration(const QpData& data, Index max_n) {
  const Index n = data.n;
  if (n > max_n) {
    throw std::invalid_argument("qp_optimum_by_enumeration: dimension too large");
  }
  const Eigen::MatrixXd q = data.dense();
  const Vector& c = data.linear;
  const double sign_tol = 1e-9;

  KnownOptimum best;
  best.f = std::numeric_limits<double>::infinity();
  bool found = false;

  // Odometer over all lower/upper/free assignments (0/1/2 per coordinate).
  std::vector<int> state(static_cast<std::size_t>(n), 0);
  Vector x(n);
  while (true) {
    bool valid = true;
    std::vector<Index> free_set;
    for (Index i = 0; i < n && valid; ++i) {
      switch (state[static_cast<std::size_t>(i)]) {
        case 0:
          if (std::isinf(data.lower[i])) valid = false;
          x[i] = data.lower[i];
          break;
        case 1:
          if (std::isinf(data.upper[i])) valid = false;
          x[i] = data.upper[i];
          break;
        default:
          free_set.push_back(i);
          break;
      }
    }
    if (valid) {
      const Index m = static_cast<Index>(free_set.size());
      bool solved = true;
      if (m > 0) {
        Eigen::MatrixXd qff(m, m);
        Vector rhs(m);
        for (Index a = 0; a < m; ++a) {
          const Index ia = free_set[static_cast<std::size_t>(a)];
          double fixed = 0.0;
          for (Index i = 0; i < n; ++i) {
            if (state[static_cast<std::size_t>(i)] != 2) fixed += q(ia, i) * x[i];
          }
          rhs[a] = -(c[ia] + fixed);
          for (Index b = 0; b < m; ++b) {
            qff(a, b) = q(ia, free_set[static_cast<std::size_t>(b)]);
          }
        }
        const Vector xf = qff.ldlt().solve(rhs);
        if ((qff * xf - rhs).lpNorm<Eigen::Infinity>() >
            1e-8 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) {
          solved = false;  // singular block
        } else {
          for (Index a = 0; a < m; ++a) {
            const Index ia = free_set[static_cast<std::size_t>(a)];
            x[ia] = xf[a];
            if (xf[a] < data.lower[ia] - sign_tol ||
                xf[a] > data.upper[ia] + sign_tol) {
              solved = false;
              break;
            }
          }
        }
      }
      if (solved) {
        const Vector g = q * x + c;
        bool kkt = true;
        for (Index i = 0; i < n && kkt; ++i) {
          const int s = state[static_cast<std::size_t>(i)];
          if (s == 0 && g[i] < -sign_tol) kkt = false;
          if (s == 1 && g[i] > sign_tol) kkt = false;
        }
        if (kkt) {
          const double f = 0.5 * x.dot(q * x) + c.dot(x);
          if (!found || f < best.f) {
            best.x = x;
            best.f = f;
            found = true;
          }
        }
      }
    }
    // Advance the odometer.
    Index pos = 0;
    while (pos < n) {
      auto& digit = state[static_cast<std::size_t>(pos)];
      if (++digit <= 2) break;
      digit = 0;
      ++pos;
    }
    if (pos == n) break;
  }
  if (!found) {
    throw std::runtime_error("qp_optimum_by_enumeration: no KKT point found");
  }
  return best;
}

KnownOptimum qp_optimum_by_projected_gradient(const QpData& data, double tol,
                                              long max_iters) {
  const Eigen::MatrixXd q = data.dense();
  const Vector& c = data.linear;
  const BoxBounds bounds(data.lower, data.upper);
  auto value = [&](const Vector& x) { return 0.5 * x.dot(q * x) + c.dot(x); };

  Vector x = project(Vector::Zero(data.n), bounds);
  double f = value(x);
  double t = 1.0;
  for (long iter = 0; iter < max_iters; ++iter) {
    const Vector g = q * x + c;
    if ((x - project(x - g, bounds)).lpNorm<Eigen::Infinity>() <= tol) break;
    double step = std::min(t * 2.0, 1e12);
    bool accepted = false;
    for (int trial = 0; trial < 200; ++trial) {
      const Vector xn = project(x - step * g, bounds);
      const double fn = value(xn);
      const double pred = g.dot(xn - x);
      if (pred < 0.0 && fn <= f + 1e-4 * pred) {
        x = xn;
        f = fn;
        t = step;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no representable decrease left
  }
  return KnownOptimum{x, f};
}

ProblemInstance generate_random_qp(Index n, std::uint64_t seed, double cond) {
  if (n < 1) throw std::invalid_argument("generate_random_qp: n must be at least 1");
  if (!(cond >= 1.0)) throw std::invalid_argument("generate_random_qp: cond must be >= 1");

  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd q = spd_matrix(n, cond, rng);

  std::uniform_real_distribution<double> linear_dist(-2.0, 2.0);
  Vector c(n);
  for (Index i = 0; i < n; ++i) c[i] = linear_dist(rng);

  const Vector x_free = q.ldlt().solve(-c);

  // Cut roughly a third of the coordinates out of the box so they are active
  // at the solution.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);
  const Index n_cut = n >= 3 ? std::max<Index>(n / 3, 1) : 0;

  std::uniform_real_distribution<double> gap_dist(0.1, 1.0);
  std::uniform_real_distribution<double> width_dist(1.0, 3.0);
  Vector lower(n);
  Vector upper(n);
  for (Index rank = 0; rank < n; ++rank) {
    const Index i = order[static_cast<std::size_t>(rank)];
    const double gap = gap_dist(rng);
    const double width = width_dist(rng);
    if (rank < n_cut) {
      if (rank % 2 == 0) {
        lower[i] = x_free[i] + gap;
        upper[i] = lower[i] + width;
      } else {
        upper[i] = x_free[i] - gap;
        lower[i] = upper[i] - width;
      }
    } else {
      lower[i] = x_free[i] - 0.5 * width - gap;
      upper[i] = x_free[i] + 0.5 * width + gap;
    }
  }

  QpData data{n, dense_to_triplets(q), c, lower, upper};
  std::ostringstream name;
  name << "qp-random-n" << n << "-s" << seed << "-c" << cond;
  ProblemInstance instance = make_qp_instance(data, name.str());
  instance.known_optimum =
      n <= 12 ? qp_optimum_by_enumeration(data)
              : qp_optimum_by_projected_gradient(data, 1e-10, 500000);
  return instance;
}

ProblemInstance generate_planted_qp(Index n, std::uint64_t seed, double cond,
                                    Index n_lower, Index n_upper) {
  if (n < 1 || n_lower < 0 || n_upper < 0 || n_lower + n_upper > n) {
    throw std::invalid_argument("generate_planted_qp: inconsistent dimensions");
  }
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd q = spd_matrix(n, cond, rng);

  std::uniform_real_distribution<double> lower_dist(-2.0, -1.0);
  std::uniform_real_distribution<double> upper_dist(1.0, 2.0);
  std::uniform_real_distribution<double> frac_dist(0.3, 0.7);
  std::uniform_real_distribution<double> mult_dist(0.5, 2.0);

  Vector lower(n), upper(n), x_star(n), g_star(n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::shuffle(order.begin(), order.end(), rng);

  for (Index rank = 0; rank < n; ++rank) {
    const Index i = order[static_cast<std::size_t>(rank)];
    lower[i] = lower_dist(rng);
    upper[i] = upper_dist(rng);
    if (rank < n_lower) {
      x_star[i] = lower[i];
      g_star[i] = mult_dist(rng);  // lambda* > 0
    } else if (rank < n_lower + n_upper) {
      x_star[i] = upper[i];
      g_star[i] = -mult_dist(rng);  // mu* > 0
    } else {
      x_star[i] = lower[i] + frac_dist(rng) * (upper[i] - lower[i]);
      g_star[i] = 0.0;
    }
  }
  const Vector c = g_star - q * x_star;

  QpData data{n, dense_to_triplets(q), c, lower, upper};
  std::ostringstream name;
  name << "qp-planted-n" << n << "-s" << seed << "-c" << cond;
  ProblemInstance instance = make_qp_instance(data, name.str());
  const double f_star = 0.5 * x_star.dot(q * x_star) + c.dot(x_star);
  instance.known_optimum = KnownOptimum{x_star, f_star};
  return instance;
}

namespace {

ProblemInstance rosenbrock_instance(Index n) {
  if (n < 2) throw std::invalid_argument("rosenbrock: n must be at least 2");
  ObjectiveModel model(
      n,
      [](const Vector& x) {
        double f = 0.0;
        for (Index i = 0; i + 1 < x.size(); ++i) {
          const double a = x[i + 1] - x[i] * x[i];
          const double b = 1.0 - x[i];
          f += 100.0 * a * a + b * b;
        }
        return f;
      },
      [](const Vector& x) -> Vector {
        Vector g = Vector::Zero(x.size());
        for (Index i = 0; i + 1 < x.size(); ++i) {
          const double a = x[i + 1] - x[i] * x[i];
          g[i] += -400.0 * a * x[i] - 2.0 * (1.0 - x[i]);
          g[i + 1] += 200.0 * a;
        }
        return g;
      });
  BoxBounds bounds(Vector::Constant(n, -2.0), Vector::Constant(n, 2.0));
  ProblemInstance instance{std::move(model), std::move(bounds),
                           "rosenbrock-" + std::to_string(n), std::nullopt};
  instance.known_optimum = KnownOptimum{Vector::Ones(n), 0.0};
  return instance;
}

ProblemInstance sphere_shifted_instance(Index n) {
  Vector shift(n);
  for (Index i = 0; i < n; ++i) {
    shift[i] = 1.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
  }
  auto s = std::make_shared<const Vector>(std::move(shift));
  ObjectiveModel model(
      n, [s](const Vector& x) { return 0.5 * (x - *s).squaredNorm(); },
      [s](const Vector& x) -> Vector { return x - *s; },
      [](const Vector&, const Vector& v) -> Vector { return v; });
  BoxBounds bounds(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0));
  const Vector x_star = project(*s, bounds);
  const double f_star = 0.5 * (x_star - *s).squaredNorm();
  ProblemInstance instance{std::move(model), std::move(bounds),
                           "sphere-shifted-" + std::to_string(n), std::nullopt};
  instance.known_optimum = KnownOptimum{x_star, f_star};
  return instance;
}

ProblemInstance nonconvex_quad_instance(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd r = random_orthogonal(n, rng);
  Vector d(n);
  for (Index i = 0; i < n; ++i) {
    const double mag = 1.0 + static_cast<double>(i % 7);
    d[i] = (i % 2 == 0) ? mag : -mag;
  }
  Eigen::MatrixXd q = r.transpose() * d.asDiagonal() * r;
  q = 0.5 * (q + q.transpose());
  std::uniform_real_distribution<double> linear_dist(-1.0, 1.0);
  Vector c(n);
  for (Index i = 0; i < n; ++i) c[i] = linear_dist(rng);
  QpData data{n, dense_to_triplets(q), c, Vector::Constant(n, -1.0),
              Vector::Constant(n, 1.0)};
  return make_qp_instance(data, "nonconvex-quad-" + std::to_string(n));
}

}  // namespace

ProblemInstance builtin(const std::string& name, Index n, std::uint64_t seed) {
  if (name == "rosenbrock") return rosenbrock_instance(n);
  if (name == "sphere-shifted") return sphere_shifted_instance(n);
  if (name == "nonconvex-quad") return nonconvex_quad_instance(n, seed);
  if (name == "qp-random") return generate_random_qp(n, seed, 100.0);
  std::ostringstream msg;
  msg << "unknown problem '" << name << "'; registered problems:";
  for (const RegistryEntry& entry : problem_registry()) msg << ' ' << entry.name;
  throw std::invalid_argument(msg.str());
}

const std::vector<RegistryEntry>& problem_registry() {
  static const std::vector<RegistryEntry> registry = {
      {"rosenbrock", "chained Rosenbrock on [-2,2]^n, minimizer at all ones"},
      {"sphere-shifted", "separable strictly convex quadratic, minimizer is the projected shift"},
      {"nonconvex-quad", "indefinite quadratic on [-1,1]^n"},
      {"qp-random", "seeded random box-constrained QP (cond 100), oracle optimum attached"},
  };
  return registry;
}

std::vector<ProblemInstance> default_suite() {
  std::vector<ProblemInstance> suite;
  suite.reserve(30);
  for (Index n : {Index{50}, Index{200}}) {
    for (std::uint64_t seed = 1; seed <= 13; ++seed) {
      const double cond = (seed % 2 == 0) ? 100.0 : 10.0;
      suite.push_back(generate_random_qp(n, seed, cond));
    }
    suite.push_back(rosenbrock_instance(n));
    suite.push_back(sphere_shifted_instance(n));
  }
  return suite;
}

}  // namespace asabcp

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

#include "asabcp/problems.hpp"
#include "test_helpers.hpp"

using namespace asabcp;
using asabcp_test::vec;

TEST_CASE("random QP generation is deterministic") {
  const ProblemInstance a = generate_random_qp(2, 1, 10.0);
  const ProblemInstance b = generate_random_qp(2, 1, 10.0);
  CHECK(a.bounds.lower() == b.bounds.lower());
  CHECK(a.bounds.upper() == b.bounds.upper());
  REQUIRE(a.known_optimum.has_value());
  REQUIRE(b.known_optimum.has_value());
  CHECK(a.known_optimum->x == b.known_optimum->x);
  CHECK(a.known_optimum->f == b.known_optimum->f);

  EvalCounters counters;
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = asabcp_test::random_feasible(a.bounds, rng);
    CHECK(a.model.value(x, counters) == b.model.value(x, counters));
    CHECK(a.model.gradient(x, counters) == b.model.gradient(x, counters));
  }
}

TEST_CASE("unit condition number gives the identity quadratic") {
  const ProblemInstance qp = generate_random_qp(5, 9, 1.0);
  // Q = R' I R = I, so the minimizer is the projection of -c.
  EvalCounters counters;
  const Vector c = qp.model.gradient(Vector::Zero(5), counters);
  const Vector expected = project(-c, qp.bounds);
  REQUIRE(qp.known_optimum.has_value());
  for (Index i = 0; i < 5; ++i) {
    CHECK(qp.known_optimum->x[i] == doctest::Approx(expected[i]).epsilon(1e-8));
  }
}

TEST_CASE("enumeration oracle matches on a closed-form instance") {
  // 1-D: f = x^2 - 2x on [0, 10], minimizer 1, value -1.
  QpData data;
  data.n = 1;
  data.upper_triangle = {{0, 0, 2.0}};
  data.linear = vec({-2.0});
  data.lower = vec({0.0});
  data.upper = vec({10.0});
  const KnownOptimum opt = qp_optimum_by_enumeration(data);
  CHECK(opt.x[0] == doctest::Approx(1.0));
  CHECK(opt.f == doctest::Approx(-1.0));
}

TEST_CASE("enumeration agrees with the planted optimum") {
  for (std::uint64_t seed : {3, 4}) {
    const ProblemInstance planted = generate_planted_qp(7, seed, 25.0, 2, 2);
    REQUIRE(planted.known_optimum.has_value());
    EvalCounters counters;
    // Rebuild the QpData from the model to feed the enumeration oracle.
    Eigen::MatrixXd q(7, 7);
    for (Index j = 0; j < 7; ++j) {
      q.col(j) = planted.model.hessvec(Vector::Zero(7), Vector::Unit(7, j), counters);
    }
    const Vector c = planted.model.gradient(Vector::Zero(7), counters);
    QpData data;
    data.n = 7;
    for (Index i = 0; i < 7; ++i) {
      for (Index j = i; j < 7; ++j) data.upper_triangle.push_back({i, j, q(i, j)});
    }
    data.linear = c;
    data.lower = planted.bounds.lower();
    data.upper = planted.bounds.upper();
    const KnownOptimum opt = qp_optimum_by_enumeration(data);
    CHECK(std::abs(opt.f - planted.known_optimum->f) <=
          1e-8 * (1.0 + std::abs(opt.f)));
    CHECK((opt.x - planted.known_optimum->x).lpNorm<Eigen::Infinity>() <= 1e-7);
  }
}

TEST_CASE("projected-gradient oracle reaches the enumerated optimum") {
  const ProblemInstance qp = generate_random_qp(8, 15, 100.0);
  REQUIRE(qp.known_optimum.has_value());
  EvalCounters counters;
  Eigen::MatrixXd q(8, 8);
  for (Index j = 0; j < 8; ++j) {
    q.col(j) = qp.model.hessvec(Vector::Zero(8), Vector::Unit(8, j), counters);
  }
  QpData data;
  data.n = 8;
  for (Index i = 0; i < 8; ++i) {
    for (Index j = i; j < 8; ++j) data.upper_triangle.push_back({i, j, q(i, j)});
  }
  data.linear = qp.model.gradient(Vector::Zero(8), counters);
  data.lower = qp.bounds.lower();
  data.upper = qp.bounds.upper();
  const KnownOptimum pg = qp_optimum_by_projected_gradient(data, 1e-10, 200000);
  CHECK(std::abs(pg.f - qp.known_optimum->f) <= 1e-9 * (1.0 + std::abs(pg.f)));
}

TEST_CASE("built-in problems") {
  SUBCASE("rosenbrock vanishes at the known minimizer") {
    const ProblemInstance problem = builtin("rosenbrock", 2);
    EvalCounters counters;
    CHECK(problem.model.value(Vector::Ones(2), counters) == 0.0);
    CHECK(problem.model.gradient(Vector::Ones(2), counters).norm() == 0.0);
  }
  SUBCASE("sphere-shifted optimum is the projected shift") {
    const ProblemInstance problem = builtin("sphere-shifted", 6);
    REQUIRE(problem.known_optimum.has_value());
    EvalCounters counters;
    const Vector g = problem.model.gradient(Vector::Zero(6), counters);
    const Vector shift = -g;  // g(x) = x - s
    CHECK(problem.known_optimum->x == project(shift, problem.bounds));
  }
  SUBCASE("unknown names list the registry") {
    CHECK_THROWS_WITH_AS(builtin("does-not-exist", 4),
                         doctest::Contains("rosenbrock"), std::invalid_argument);
  }
}

TEST_CASE("built-in gradients match central differences") {
  std::mt19937_64 rng(31);
  EvalCounters counters;
  for (const char* name : {"rosenbrock", "sphere-shifted", "nonconvex-quad"}) {
    const ProblemInstance problem = builtin(name, 5);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector x = asabcp_test::random_feasible(problem.bounds, rng);
      const Vector g = problem.model.gradient(x, counters);
      for (Index i = 0; i < 5; ++i) {
        const double h = 1e-6 * (1.0 + std::abs(x[i]));
        Vector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (problem.model.value(xp, counters) -
                           problem.model.value(xm, counters)) /
                          (2.0 * h);
        CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6).scale(1.0 + std::abs(g[i])));
      }
    }
  }
}

TEST_CASE("QP text format") {
  SUBCASE("closed-form 1-D instance parses") {
    std::istringstream in(
        "# tiny instance\n"
        "qp 1\n"
        "n 1\n"
        "Q 1\n"
        "0 0 2\n"
        "c -2\n"
        "l 0\n"
        "u 10\n");
    const QpData data = read_qp(in);
    CHECK(data.n == 1);
    const KnownOptimum opt = qp_optimum_by_enumeration(data);
    CHECK(opt.x[0] == doctest::Approx(1.0));
    CHECK(opt.f == doctest::Approx(-1.0));
  }

  SUBCASE("empty Q section is a linear objective") {
    std::istringstream in("qp 1\nn 2\nQ 0\nc 1 -1\nl 0 0\nu 2 2\n");
    const QpData data = read_qp(in);
    const KnownOptimum opt = qp_optimum_by_enumeration(data);
    CHECK(opt.x == vec({0.0, 2.0}));  // vertex per the sign of c
  }

  SUBCASE("lower-triangle entries are rejected") {
    std::istringstream in("qp 1\nn 2\nQ 1\n1 0 2\nc 0 0\nl 0 0\nu 1 1\n");
    CHECK_THROWS_AS(read_qp(in), ParseError);
  }

  SUBCASE("duplicate triplets are rejected with the line number") {
    std::istringstream in("qp 1\nn 1\nQ 2\n0 0 1\n0 0 2\nc 0\nl 0\nu 1\n");
    try {
      read_qp(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
    }
  }

  SUBCASE("out-of-range index rejected") {
    std::istringstream in("qp 1\nn 1\nQ 1\n0 1 1\nc 0\nl 0\nu 1\n");
    CHECK_THROWS_AS(read_qp(in), ParseError);
  }

  SUBCASE("non-finite matrix values rejected") {
    std::istringstream in("qp 1\nn 1\nQ 1\n0 0 inf\nc 0\nl 0\nu 1\n");
    CHECK_THROWS_AS(read_qp(in), ParseError);
  }

  SUBCASE("malformed header rejected") {
    std::istringstream in("qqp 1\nn 1\nQ 0\nc 0\nl 0\nu 1\n");
    CHECK_THROWS_AS(read_qp(in), ParseError);
  }

  SUBCASE("infinite bounds round-trip") {
    std::istringstream in("qp 1\nn 2\nQ 1\n0 1 0.5\nc 1 2\nl -inf 0\nu 3 inf\n");
    const QpData data = read_qp(in);
    CHECK(std::isinf(data.lower[0]));
    CHECK(std::isinf(data.upper[1]));
  }
}

TEST_CASE("write-read round trip is bit exact") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> value(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    QpData data;
    data.n = 4;
    for (Index i = 0; i < 4; ++i) {
      for (Index j = i; j < 4; ++j) {
        if ((i + j + trial) % 3 == 0) {
          data.upper_triangle.push_back({i, j, value(rng) / 7.0});
        }
      }
    }
    data.linear = vec({value(rng), value(rng) / 3.0, value(rng), 0.1});
    data.lower = vec({-1.0, -std::numeric_limits<double>::infinity(), value(rng) - 5.0, 0.0});
    data.upper = vec({1.0, 2.0, value(rng) + 5.0, std::numeric_limits<double>::infinity()});

    std::ostringstream out;
    write_qp(data, out);
    std::istringstream in(out.str());
    const QpData back = read_qp(in);

    REQUIRE(back.upper_triangle.size() == data.upper_triangle.size());
    for (std::size_t t = 0; t < data.upper_triangle.size(); ++t) {
      CHECK(back.upper_triangle[t].row == data.upper_triangle[t].row);
      CHECK(back.upper_triangle[t].col == data.upper_triangle[t].col);
      CHECK(back.upper_triangle[t].value == data.upper_triangle[t].value);
    }
    CHECK(back.linear == data.linear);
    CHECK(back.lower == data.lower);
    CHECK(back.upper == data.upper);
  }
}

TEST_CASE("generated QPs expose exact Hessian products") {
  const ProblemInstance qp = generate_random_qp(6, 2, 100.0);
  std::mt19937_64 rng(1);
  EvalCounters counters;
  for (int trial = 0; trial < 30; ++trial) {
    const Vector x = asabcp_test::random_feasible(qp.bounds, rng);
    Vector v(6);
    std::normal_distribution<double> gauss;
    for (Index i = 0; i < 6; ++i) v[i] = gauss(rng);
    const Vector exact = qp.model.hessvec(x, v, counters);
    const Vector fd = hessvec_fd(qp.model, x, v, counters);
    for (Index i = 0; i < 6; ++i) {
      CHECK(fd[i] == doctest::Approx(exact[i]).epsilon(1e-5).scale(1.0 + std::abs(exact[i])));
    }
  }
}

TEST_CASE("generator argument validation") {
  CHECK_THROWS_AS(generate_random_qp(0, 1, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(generate_random_qp(4, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(generate_planted_qp(4, 1, 10.0, 3, 3), std::invalid_argument);
  CHECK_THROWS_AS(qp_optimum_by_enumeration(
                      QpData{20, {}, Vector::Zero(20), Vector::Constant(20, -1.0),
                             Vector::Constant(20, 1.0)}),
                  std::invalid_argument);
}

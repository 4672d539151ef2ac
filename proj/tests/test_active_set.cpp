#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <random>

#include "asabcp/active_set.hpp"
#include "asabcp/problems.hpp"
#include "test_helpers.hpp"

using namespace asabcp;
using asabcp_test::vec;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("multiplier estimates match the closed form") {
  const BoxBounds box(vec({0.0}), vec({2.0}));

  SUBCASE("interior point") {
    const MultiplierEstimates m = multipliers(vec({0.5}), vec({1.0}), box);
    CHECK(m.lambda[0] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(m.mu[0] == doctest::Approx(-0.1).epsilon(1e-12));
  }
  SUBCASE("zero gradient zeroes both") {
    const MultiplierEstimates m = multipliers(vec({0.5}), vec({0.0}), box);
    CHECK(m.lambda[0] == 0.0);
    CHECK(m.mu[0] == 0.0);
  }
  SUBCASE("at the lower bound the lambda weight is one") {
    const MultiplierEstimates m = multipliers(vec({0.0}), vec({2.0}), box);
    CHECK(m.lambda[0] == doctest::Approx(2.0));
    CHECK(m.mu[0] == 0.0);
  }
}

TEST_CASE("multiplier identity and complementarity structure") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> grad(-5.0, 5.0);
  const BoxBounds box(vec({-1.0, 0.0, -kInf, 3.0, -kInf}),
                      vec({1.0, kInf, 2.0, 4.0, kInf}));
  for (int trial = 0; trial < 500; ++trial) {
    const Vector x = asabcp_test::random_feasible(box, rng);
    Vector g(5);
    for (Index i = 0; i < 5; ++i) g[i] = grad(rng);
    const MultiplierEstimates m = multipliers(x, g, box);
    for (Index i = 0; i < 5; ++i) {
      CHECK(std::abs(g[i] - m.lambda[i] + m.mu[i]) <=
            1e-12 * std::max(1.0, std::abs(g[i])));
    }
  }
  // lambda vanishes at the upper bound, mu at the lower bound, exactly.
  const MultiplierEstimates at_u = multipliers(vec({1.0, 0.5, 0.5, 3.5, 0.0}),
                                               Vector::Ones(5), box);
  CHECK(at_u.lambda[0] == 0.0);
  const MultiplierEstimates at_l = multipliers(vec({-1.0, 0.5, 0.5, 3.5, 0.0}),
                                               Vector::Ones(5), box);
  CHECK(at_l.mu[0] == 0.0);
}

TEST_CASE("active-set estimate membership") {
  const BoxBounds box(vec({0.0}), vec({2.0}));
  const double eps = 0.1;

  SUBCASE("at the lower bound with positive gradient") {
    const ActiveSetPartition p = estimate_active_set(vec({0.0}), vec({2.0}), box, eps);
    CHECK(p.lower_active == std::vector<Index>{0});
    CHECK(p.nonactive.empty());
  }
  SUBCASE("interior point far from the bounds") {
    const ActiveSetPartition p = estimate_active_set(vec({1.0}), vec({5.0}), box, eps);
    CHECK(p.nonactive == std::vector<Index>{0});
  }
  SUBCASE("near the upper bound with negative gradient") {
    const ActiveSetPartition p = estimate_active_set(vec({1.99}), vec({-3.0}), box, eps);
    CHECK(p.upper_active == std::vector<Index>{0});
  }
}

TEST_CASE("partition is disjoint and exhaustive on random points") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> grad(-10.0, 10.0);
  const BoxBounds box(vec({-1.0, 0.0, -2.0, -kInf}), vec({1.0, 3.0, -1.0, 0.0}));
  for (int trial = 0; trial < 10000; ++trial) {
    const Vector x = asabcp_test::random_feasible(box, rng);
    Vector g(4);
    for (Index i = 0; i < 4; ++i) g[i] = grad(rng);
    const ActiveSetPartition p = estimate_active_set(x, g, box, 1e-2);
    std::vector<bool> seen(4, false);
    for (auto set : {&p.lower_active, &p.upper_active, &p.nonactive}) {
      for (Index i : *set) {
        REQUIRE(!seen[static_cast<std::size_t>(i)]);
        seen[static_cast<std::size_t>(i)] = true;
      }
    }
    for (bool b : seen) REQUIRE(b);
  }
}

TEST_CASE("stage-1 move fixes active variables at their bounds") {
  const BoxBounds box(vec({0.0, 0.0}), vec({2.0, 2.0}));

  ActiveSetPartition p;
  p.lower_active = {0};
  p.nonactive = {1};
  CHECK(active_set_step(vec({0.3, 1.0}), p, box) == vec({0.0, 1.0}));

  ActiveSetPartition all_free;
  all_free.nonactive = {0, 1};
  const Vector x = vec({0.3, 1.0});
  CHECK(active_set_step(x, all_free, box) == x);

  ActiveSetPartition both;
  both.upper_active = {0};
  both.lower_active = {1};
  CHECK(active_set_step(vec({1.99, 0.05}), both, box) == vec({2.0, 0.0}));
}

TEST_CASE("projected-gradient stationarity measure") {
  const BoxBounds box(vec({0.0, 0.0}), vec({2.0, 2.0}));
  CHECK(stationarity_measure(vec({0.0, 1.0}), vec({1.0, 0.0}), box) == 0.0);
  CHECK(stationarity_measure(vec({1.0, 1.0}), vec({0.5, 0.0}), box) == doctest::Approx(0.5));
  CHECK(stationarity_measure(vec({1.0, 1.0}), vec({0.0, 0.0}), box) == 0.0);
}

TEST_CASE("partition stationarity check") {
  const BoxBounds box(vec({0.0, 0.0}), vec({2.0, 2.0}));

  SUBCASE("stationary point passes") {
    const Vector x = vec({0.0, 1.0});
    const Vector g = vec({1.0, 0.0});
    const ActiveSetPartition p = estimate_active_set(x, g, box, 1e-6);
    CHECK(partition_stationarity_check(x, g, p, box, 1e-8));
  }
  SUBCASE("interior gradient fails the non-active clause") {
    const Vector x = vec({1.0, 1.0});
    const Vector g = vec({0.5, 0.0});
    const ActiveSetPartition p = estimate_active_set(x, g, box, 1e-6);
    CHECK(!partition_stationarity_check(x, g, p, box, 1e-8));
  }
  SUBCASE("lower-active clause holds at the bound with positive gradient") {
    ActiveSetPartition p;
    p.lower_active = {0};
    p.nonactive = {1};
    CHECK(partition_stationarity_check(vec({0.0, 1.0}), vec({2.0, 0.0}), p, box, 1e-8));
  }
}

TEST_CASE("partition check agrees with the measure away from the threshold") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> grad(-3.0, 3.0);
  const BoxBounds box(vec({-1.0, -1.0, -1.0}), vec({1.0, 1.0, 1.0}));
  const double tol = 1e-6;
  const double threshold = 10.0 * tol;
  int compared = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Vector x = asabcp_test::random_feasible(box, rng);
    Vector g(3);
    for (Index i = 0; i < 3; ++i) g[i] = grad(rng);
    const double measure = stationarity_measure(x, g, box);
    if (std::abs(measure - threshold) < 10.0 * tol) continue;
    ++compared;
    const ActiveSetPartition p = estimate_active_set(x, g, box, 1e-6);
    CHECK(partition_stationarity_check(x, g, p, box, tol) == (measure <= threshold));
  }
  CHECK(compared > 9000);
}

TEST_CASE("epsilon safeguard halves on insufficient decrease") {
  SUBCASE("decrease bound violated") {
    const EpsilonState out = epsilon_safeguard({1e-2, 0}, 10.0, 9.0, 1.0);
    CHECK(out.epsilon == doctest::Approx(5e-3));
    CHECK(out.halvings == 1);
  }
  SUBCASE("no move leaves the state alone") {
    const EpsilonState out = epsilon_safeguard({1e-2, 0}, 10.0, 9.0, 0.0);
    CHECK(out.epsilon == 1e-2);
    CHECK(out.halvings == 0);
  }
  SUBCASE("exact boundary satisfies") {
    // f_xtilde - f_x == -step^2 / (2 eps)
    const EpsilonState out = epsilon_safeguard({1e-2, 0}, 10.0, 10.0 - 50.0, 1.0);
    CHECK(out.epsilon == 1e-2);
    CHECK(out.halvings == 0);
  }
}

TEST_CASE("stage-1 descent inequality with a valid epsilon") {
  // Strictly convex QP with known largest eigenvalue: eps = 1 / lambda_max.
  const ProblemInstance qp = generate_random_qp(6, 21, 50.0);
  const Eigen::MatrixXd h = [&] {
    EvalCounters c;
    Eigen::MatrixXd m(6, 6);
    for (Index j = 0; j < 6; ++j) {
      m.col(j) = qp.model.hessvec(Vector::Zero(6), Vector::Unit(6, j), c);
    }
    return m;
  }();
  const double lambda_max = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h)
                                .eigenvalues()
                                .maxCoeff();
  const double eps = 1.0 / lambda_max;

  std::mt19937_64 rng(77);
  EvalCounters counters;
  for (int trial = 0; trial < 1000; ++trial) {
    const Vector x = asabcp_test::random_feasible(qp.bounds, rng);
    const Vector g = qp.model.gradient(x, counters);
    const ActiveSetPartition p = estimate_active_set(x, g, qp.bounds, eps);
    const Vector xt = active_set_step(x, p, qp.bounds);
    const double lhs = qp.model.value(xt, counters) - qp.model.value(x, counters);
    const double rhs = -(x - xt).squaredNorm() / (2.0 * eps) + 1e-10;
    CHECK(lhs <= rhs);
  }
}

TEST_CASE("estimate identifies the active set near a nondegenerate optimum") {
  const ProblemInstance qp = generate_planted_qp(8, 5, 30.0, 2, 2);
  REQUIRE(qp.known_optimum.has_value());
  const Vector& x_star = qp.known_optimum->x;

  std::vector<Index> true_lower, true_upper;
  for (Index i = 0; i < 8; ++i) {
    if (x_star[i] == qp.bounds.lower()[i]) true_lower.push_back(i);
    if (x_star[i] == qp.bounds.upper()[i]) true_upper.push_back(i);
  }
  REQUIRE(true_lower.size() == 2);
  REQUIRE(true_upper.size() == 2);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> noise(-1e-6, 1e-6);
  EvalCounters counters;
  for (int trial = 0; trial < 200; ++trial) {
    Vector x(8);
    for (Index i = 0; i < 8; ++i) x[i] = x_star[i] + noise(rng);
    x = project(x, qp.bounds);
    const Vector g = qp.model.gradient(x, counters);
    const ActiveSetPartition p = estimate_active_set(x, g, qp.bounds, 1e-5);
    CHECK(p.lower_active == true_lower);
    CHECK(p.upper_active == true_upper);
  }
}

TEST_CASE("one-sided infinite bounds take the limiting multipliers") {
  const BoxBounds upper_free(vec({0.0}), vec({kInf}));
  const MultiplierEstimates up = multipliers(vec({1.0}), vec({3.0}), upper_free);
  CHECK(up.lambda[0] == 3.0);
  CHECK(up.mu[0] == 0.0);

  const BoxBounds lower_free(vec({-kInf}), vec({2.0}));
  const MultiplierEstimates lo = multipliers(vec({1.0}), vec({3.0}), lower_free);
  CHECK(lo.lambda[0] == 0.0);
  CHECK(lo.mu[0] == -3.0);

  // An infinitely-bounded side never enters the corresponding active set.
  const ActiveSetPartition p =
      estimate_active_set(vec({1.0}), vec({-3.0}), upper_free, 1e10);
  CHECK(p.upper_active.empty());
}

TEST_CASE("epsilon halving never underflows to zero") {
  EpsilonState state{5e-324, 0};  // smallest denormal
  state = epsilon_safeguard(state, 10.0, 20.0, 1.0);
  CHECK(state.epsilon > 0.0);
  CHECK(state.halvings == 0);
}

TEST_CASE("both stationarity tests accept planted optima") {
  for (std::uint64_t seed : {21, 22, 23}) {
    const ProblemInstance qp = generate_planted_qp(9, seed, 40.0, 2, 3);
    const Vector& x_star = qp.known_optimum->x;
    EvalCounters counters;
    const Vector g = qp.model.gradient(x_star, counters);
    CHECK(stationarity_measure(x_star, g, qp.bounds) <= 1e-12);
    const ActiveSetPartition p = estimate_active_set(x_star, g, qp.bounds, 1e-6);
    CHECK(partition_stationarity_check(x_star, g, p, qp.bounds, 1e-10));
  }
}

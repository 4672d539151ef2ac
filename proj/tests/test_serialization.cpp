#include <doctest.h>

#include <nlohmann/json.hpp>

#include <sstream>

#include "asabcp/problems.hpp"
#include "asabcp/serialization.hpp"
#include "asabcp/solver.hpp"
#include "test_helpers.hpp"

using namespace asabcp;

TEST_CASE("JSON report round trip") {
  const ProblemInstance qp = generate_random_qp(5, 12, 10.0);
  SolverConfig config;
  const SolveReport report = solve(qp, config);
  REQUIRE(report.status == SolveStatus::converged);

  const nlohmann::json j = report_to_json(report);
  const std::string text = j.dump();
  const SolveReport back = report_from_json(nlohmann::json::parse(text));
  CHECK(reports_equal(report, back));
}

TEST_CASE("trace CSV column order") {
  SolverConfig config;
  config.trace_level = TraceLevel::scalars;
  const SolveReport report = solve(builtin("rosenbrock", 2), config);
  REQUIRE(!report.trace.empty());

  std::ostringstream out;
  write_trace_csv(report.trace, out);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "iter,f,f_R,stationarity,n_lower,n_upper,n_nonactive,alpha,cg_iters,"
        "channel");
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("0,", 0) == 0);
  long lines = 1;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == static_cast<long>(report.trace.size()));
}

TEST_CASE("status names round trip") {
  for (SolveStatus status :
       {SolveStatus::converged, SolveStatus::max_iters, SolveStatus::max_fevals,
        SolveStatus::max_time, SolveStatus::line_search_failure,
        SolveStatus::diverged}) {
    CHECK(solve_status_from_string(to_string(status)) == status);
  }
  CHECK_THROWS_AS(solve_status_from_string("nope"), std::invalid_argument);
}

TEST_CASE("JSON round trip survives non-finite fields") {
  SolveReport report;
  report.problem = "broken";
  report.status = SolveStatus::diverged;
  report.f_final = std::numeric_limits<double>::quiet_NaN();
  report.stationarity = std::numeric_limits<double>::quiet_NaN();
  report.x_final = Vector::Zero(2);
  const SolveReport back =
      report_from_json(nlohmann::json::parse(report_to_json(report).dump()));
  CHECK(reports_equal(report, back));
}

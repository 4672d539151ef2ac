#include "asabcp/serialization.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace asabcp {

nlohmann::json report_to_json(const SolveReport& report) {
  nlohmann::json j;
  j["problem"] = report.problem;
  j["status"] = to_string(report.status);
  j["iterations"] = report.iterations;
  j["f_final"] = report.f_final;
  j["stationarity"] = report.stationarity;
  j["x_final"] = std::vector<double>(report.x_final.begin(), report.x_final.end());
  j["eps_halvings"] = report.eps_halvings;
  j["counters"] = {{"n_f", report.counters.n_f},
                   {"n_g", report.counters.n_g},
                   {"n_hv", report.counters.n_hv},
                   {"cg_iters", report.counters.cg_iters}};
  return j;
}

SolveReport report_from_json(const nlohmann::json& j) {
  // Non-finite values serialize as null.
  auto as_double = [](const nlohmann::json& v) {
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                       : v.get<double>();
  };
  SolveReport report;
  report.problem = j.at("problem").get<std::string>();
  report.status = solve_status_from_string(j.at("status").get<std::string>());
  report.iterations = j.at("iterations").get<long>();
  report.eps_halvings = j.value("eps_halvings", 0);
  report.f_final = as_double(j.at("f_final"));
  report.stationarity = as_double(j.at("stationarity"));
  const auto x = j.at("x_final").get<std::vector<double>>();
  report.x_final = Eigen::Map<const Vector>(x.data(), static_cast<Index>(x.size()));
  const auto& counters = j.at("counters");
  report.counters.n_f = counters.at("n_f").get<long>();
  report.counters.n_g = counters.at("n_g").get<long>();
  report.counters.n_hv = counters.at("n_hv").get<long>();
  report.counters.cg_iters = counters.at("cg_iters").get<long>();
  return report;
}

namespace {

bool same_double(double a, double b) {
  return a == b || (std::isnan(a) && std::isnan(b));
}

}  // namespace

bool reports_equal(const SolveReport& a, const SolveReport& b) {
  if (a.x_final.size() != b.x_final.size()) return false;
  for (Index i = 0; i < a.x_final.size(); ++i) {
    if (!same_double(a.x_final[i], b.x_final[i])) return false;
  }
  return a.problem == b.problem && a.status == b.status &&
         a.iterations == b.iterations && a.eps_halvings == b.eps_halvings &&
         same_double(a.f_final, b.f_final) &&
         same_double(a.stationarity, b.stationarity) &&
         a.counters.n_f == b.counters.n_f && a.counters.n_g == b.counters.n_g &&
         a.counters.n_hv == b.counters.n_hv &&
         a.counters.cg_iters == b.counters.cg_iters;
}

namespace {

std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

void write_trace_csv(const std::vector<TraceRecord>& trace, std::ostream& out) {
  out << "iter,f,f_R,stationarity,n_lower,n_upper,n_nonactive,alpha,cg_iters,"
         "channel\n";
  for (const TraceRecord& rec : trace) {
    out << rec.iter << ',' << csv_double(rec.f) << ',' << csv_double(rec.f_ref)
        << ',' << csv_double(rec.stationarity) << ',' << rec.n_lower << ','
        << rec.n_upper << ',' << rec.n_nonactive << ',' << csv_double(rec.alpha)
        << ',' << rec.cg_iters << ',' << to_string(rec.channel) << '\n';
  }
}

}  // namespace asabcp

#pragma once

#include <iosfwd>

#include <nlohmann/json_fwd.hpp>

#include "asabcp/solver.hpp"

namespace asabcp {

/// JSON form of a solve report (everything except the trace, which goes to
/// CSV). report_from_json(report_to_json(r)) reproduces r field for field.
nlohmann::json report_to_json(const SolveReport& report);
SolveReport report_from_json(const nlohmann::json& j);

/// Equality over the serialized fields; the trace is not compared.
bool reports_equal(const SolveReport& a, const SolveReport& b);

/// Trace CSV, column order:
/// iter,f,f_R,stationarity,n_lower,n_upper,n_nonactive,alpha,cg_iters,channel
void write_trace_csv(const std::vector<TraceRecord>& trace, std::ostream& out);

}  // namespace asabcp

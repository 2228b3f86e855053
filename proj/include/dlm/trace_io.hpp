#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "dlm/simulator.hpp"

namespace dlm {

/// Formats with 17 significant digits ("%.17g").
std::string format_real(double v);

/// `k,node,x,lambda,v`, one row per (iteration, node).
void write_trace_csv(const RunTrace& t, std::ostream& os);
/// `k,residual,lagrangian,spread`, one row per iteration.
void write_summary_csv(const RunTrace& t, std::ostream& os);

/// Reads a trace CSV back into the x/λ/v columns. Shares, schedule, alpha
/// and derived columns are left for the caller to fill (see compute_derived).
RunTrace read_trace_csv(std::string_view text);

}  // namespace dlm

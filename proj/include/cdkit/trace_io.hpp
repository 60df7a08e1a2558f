#pragma once

#include <iosfwd>
#include <string>

#include "cdkit/solve_types.hpp"

namespace cdkit {

/// JSON array of {"k","rnorm","a","gamma","sigma","omega","pAp"} objects.
/// Values not computed at a step are written as null.
std::string trace_to_json(const SolveTrace& trace);

/// Header "k,rnorm,a,gamma,sigma,omega,pAp"; missing values are empty cells.
void write_trace_csv(std::ostream& out, const SolveTrace& trace);
std::string trace_to_csv(const SolveTrace& trace);

/// Parses the output of trace_to_json back into records (basis not included).
SolveTrace trace_from_json(const std::string& text);

}  // namespace cdkit

#pragma once

#include <string>

namespace cdkit {

/// Shortest text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace cdkit

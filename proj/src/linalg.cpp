#include "cdkit/linalg.hpp"

#include <cmath>
#include <string>

#include "cdkit/errors.hpp"

namespace cdkit {

double dot(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm_squared(std::span<const double> x) { return dot(x, x); }

double norm(std::span<const double> x) { return std::sqrt(norm_squared(x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  require_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void require_same_size(std::span<const double> x, std::span<const double> y,
                       const char* where) {
  if (x.size() != y.size()) {
    throw DimensionError(std::string(where) + ": length " +
                         std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
  }
}

bool all_finite(std::span<const double> x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace cdkit

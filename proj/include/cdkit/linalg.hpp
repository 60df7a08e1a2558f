#pragma once

#include <span>
#include <vector>

namespace cdkit {

using Vector = std::vector<double>;

double dot(std::span<const double> x, std::span<const double> y);
double norm(std::span<const double> x);
double norm_squared(std::span<const double> x);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Throws DimensionError unless both spans have the same length.
void require_same_size(std::span<const double> x, std::span<const double> y,
                       const char* where);

bool all_finite(std::span<const double> x);

}  // namespace cdkit

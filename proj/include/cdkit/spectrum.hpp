#pragma once

#include <cstddef>

#include "cdkit/symmetric_operator.hpp"

namespace cdkit {

struct SpectrumBounds {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  /// Absolute accuracy of both values (rounding level for the dense route).
  double tolerance = 0.0;
  bool iterative = false;

  double condition_number() const { return lambda_max / lambda_min; }
};

struct SpectrumOptions {
  std::size_t dense_limit = 2000;
  double power_tol = 1e-8;
  /// 0 selects 10 n.
  std::size_t power_max_iters = 0;
};

/// Extreme eigenvalues of an SPD operator. Explicit operators up to
/// dense_limit use a dense symmetric eigensolver; anything else falls back
/// to power iteration on A (largest) and on lambda_max I - A (smallest).
/// Throws EstimateError with the partial result when power iteration does
/// not settle.
SpectrumBounds spectrum_bounds(const SymmetricOperator& A,
                               const SpectrumOptions& options = {});

}  // namespace cdkit

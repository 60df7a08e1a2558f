#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdkit/diagnostics.hpp"
#include "cdkit/symmetric_operator.hpp"

namespace cdkit {

/// Search directions assembled from the first m steps of a stored run.
/// Indices are 1-based: index i refers to trace step i - 1 (a_{i-1}, p_{i-1}).
struct NewtonDirections {
  Vector d_m;  ///< sum_{i=1..m} a_i p_i
  Vector d_P;  ///< positive curvature part
  Vector d_N;  ///< negative curvature part
  std::optional<Vector> s;  ///< p_l / ||r_l||, present iff I_N is nonempty
  std::vector<std::size_t> I_P;
  std::vector<std::size_t> I_N;
  /// |p^T A p| <= eps ||p||^2; in neither index set, still part of d_m.
  std::vector<std::size_t> zero_curvature;
  std::optional<std::size_t> ell;
};

/// Uses steps 1..m (m = 0 selects all directions). Throws SpecError on an
/// empty bundle or m larger than the number of directions.
NewtonDirections assemble_directions(const BasisBundle& bundle, std::size_t m = 0,
                                     double zero_eps = 1e-14);

/// Q = f0 + grad^T d + 1/2 d^T A d.
double quadratic_model(const SymmetricOperator& A, std::span<const double> grad, double f0,
                       std::span<const double> d);

/// Q at d^1..d^m along the run, with grad = -r_0 (A y - b at y_0 as origin).
std::vector<double> model_values(const SymmetricOperator& A, const BasisBundle& bundle,
                                 double f0 = 0.0);

struct TruncationResult {
  /// ratios[m-1] = (Q_m - Q_{m-1}) / (Q_m / m) for m >= 2; NaN for m = 1 and
  /// where Q_m = 0.
  std::vector<double> ratios;
  std::vector<bool> undefined;
  std::optional<std::size_t> first_pass;  ///< smallest m >= 2 with ratio <= alpha
};

/// q_values[m-1] = Q(d^m). Throws SpecError unless 0 < alpha < 1 (alpha = 1
/// is accepted as the boundary case).
TruncationResult truncation_test(std::span<const double> q_values, double alpha);

/// {d_m_norm, |I_P|, |I_N|, ell, ratios[]}
std::string to_json(const NewtonDirections& dirs, const TruncationResult& trunc);

}  // namespace cdkit

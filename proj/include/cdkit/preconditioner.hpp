#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cdkit/linalg.hpp"
#include "cdkit/symmetric_operator.hpp"

namespace cdkit {

/// The SPD map v -> M v applied inside CD_M. Only products are ever
/// needed; no factor of M is formed.
class Preconditioner {
 public:
  using ApplyFn = SymmetricOperator::ApplyFn;

  static Preconditioner identity(std::size_t n);
  /// v_i -> v_i / d_i. Throws SpecError naming the first d_i <= 0.
  static Preconditioner jacobi(std::vector<double> d);
  /// Wraps a caller routine. Construction samples v^T M v > 0 on 16
  /// seeded random vectors and throws SpecError on failure; this is a
  /// spot check, not a proof of definiteness.
  static Preconditioner custom(std::size_t n, ApplyFn fn, std::string name = "custom");
  /// M applied as the product with an explicit SPD operator.
  static Preconditioner from_operator(SymmetricOperator M, std::string name = "operator");

  enum class Kind { kIdentity, kJacobi, kCustom };

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& jacobi_diagonal() const noexcept { return d_; }

  Vector apply(std::span<const double> v) const;
  void apply(std::span<const double> v, std::span<double> out) const;

 private:
  Preconditioner(Kind kind, std::size_t n, std::string name)
      : kind_(kind), n_(n), name_(std::move(name)) {}

  Kind kind_;
  std::size_t n_;
  std::string name_;
  std::vector<double> d_;
  ApplyFn fn_;
};

/// Jacobi with d_i = A_ii. Throws SpecError identifying a nonpositive entry.
Preconditioner jacobi_from_operator(const SymmetricOperator& A);

}  // namespace cdkit

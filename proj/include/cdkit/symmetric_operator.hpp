#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "cdkit/linalg.hpp"

namespace cdkit {

/// A symmetric linear map v -> Av.
///
/// Explicit forms keep only the diagonal and the upper triangle, so
/// A(i,j) == A(j,i) holds bit-for-bit. Application walks the upper
/// triangle once and mirrors each off-diagonal entry on the fly.
/// Callback forms wrap a caller-supplied routine; symmetry is then the
/// caller's responsibility.
class SymmetricOperator {
 public:
  using ApplyFn =
      std::function<void(std::span<const double> in, std::span<double> out)>;

  /// Row-major packed upper triangle (diagonal included).
  struct DenseSymmetric {
    std::size_t n = 0;
    std::vector<double> upper;
  };

  /// CSR over the upper triangle: every stored column index is >= its row.
  struct SparseSymmetricCSR {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;
    std::vector<std::size_t> col;
    std::vector<double> values;
  };

  struct Callback {
    std::size_t n = 0;
    ApplyFn fn;
  };

  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };

  enum class Kind { kDense, kSparse, kCallback };

  /// Full row-major n*n input; throws SpecError unless exactly symmetric.
  static SymmetricOperator dense(std::size_t n, std::span<const double> full);

  /// Builds a dense operator from entry(i, j), queried only for j >= i.
  static SymmetricOperator dense_from_upper(
      std::size_t n, const std::function<double(std::size_t, std::size_t)>& entry);

  /// Entries may come from either triangle; (i,j) and (j,i) address the
  /// same stored value. A position given twice is a SpecError.
  static SymmetricOperator sparse(std::size_t n, std::vector<Triplet> entries);

  static SymmetricOperator diagonal(std::span<const double> d);

  static SymmetricOperator callback(std::size_t n, ApplyFn fn);

  std::size_t dim() const noexcept { return n_; }
  Kind kind() const noexcept;
  bool is_explicit() const noexcept { return kind() != Kind::kCallback; }

  Vector apply(std::span<const double> v) const;
  void apply(std::span<const double> v, std::span<double> out) const;

  /// A(i, j). Explicit forms read storage; callbacks probe with e_j.
  double entry(std::size_t i, std::size_t j) const;

  Vector diagonal_entries() const;

  /// Visits stored (i, j, value) with j >= i. Explicit forms only; dense
  /// storage also reports its structural zeros.
  void for_each_upper(
      const std::function<void(std::size_t, std::size_t, double)>& visit) const;

  std::size_t stored_entries() const;

  const DenseSymmetric* as_dense() const { return std::get_if<DenseSymmetric>(&rep_); }
  const SparseSymmetricCSR* as_sparse() const {
    return std::get_if<SparseSymmetricCSR>(&rep_);
  }

 private:
  using Rep = std::variant<DenseSymmetric, SparseSymmetricCSR, Callback>;
  SymmetricOperator(std::size_t n, Rep rep) : n_(n), rep_(std::move(rep)) {}

  std::size_t n_;
  Rep rep_;
};

}  // namespace cdkit

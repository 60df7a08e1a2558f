#include "cdkit/symmetric_operator.hpp"

#include <algorithm>
#include <string>

#include "cdkit/errors.hpp"

namespace cdkit {

namespace {

std::size_t packed_index(std::size_t n, std::size_t i, std::size_t j) {
  // Row i of the packed upper triangle starts after rows 0..i-1, which hold
  // n + (n-1) + ... + (n-i+1) entries.
  return i * n - (i * (i - 1)) / 2 + (j - i);
}

void require_dim(std::size_t n, const char* where) {
  if (n == 0) throw SpecError(std::string(where) + ": dimension must be >= 1");
}

}  // namespace

SymmetricOperator SymmetricOperator::dense(std::size_t n,
                                           std::span<const double> full) {
  require_dim(n, "dense");
  if (full.size() != n * n) {
    throw DimensionError("dense: expected " + std::to_string(n * n) +
                         " values, got " + std::to_string(full.size()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (full[i * n + j] != full[j * n + i]) {
        throw SpecError("dense: matrix is not symmetric at (" +
                        std::to_string(i) + ", " + std::to_string(j) + ")");
      }
    }
  }
  return dense_from_upper(n, [&](std::size_t i, std::size_t j) {
    return full[i * n + j];
  });
}

SymmetricOperator SymmetricOperator::dense_from_upper(
    std::size_t n, const std::function<double(std::size_t, std::size_t)>& entry) {
  require_dim(n, "dense_from_upper");
  DenseSymmetric d;
  d.n = n;
  d.upper.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) d.upper.push_back(entry(i, j));
  }
  return SymmetricOperator(n, std::move(d));
}

SymmetricOperator SymmetricOperator::sparse(std::size_t n,
                                            std::vector<Triplet> entries) {
  require_dim(n, "sparse");
  for (auto& t : entries) {
    if (t.row >= n || t.col >= n) {
      throw DimensionError("sparse: entry (" + std::to_string(t.row) + ", " +
                           std::to_string(t.col) + ") outside " +
                           std::to_string(n) + "x" + std::to_string(n));
    }
    if (t.col < t.row) std::swap(t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseSymmetricCSR csr;
  csr.n = n;
  csr.row_ptr.assign(n + 1, 0);
  csr.col.reserve(entries.size());
  csr.values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (k > 0 && entries[k].row == entries[k - 1].row &&
        entries[k].col == entries[k - 1].col) {
      throw SpecError("sparse: position (" + std::to_string(entries[k].row) +
                      ", " + std::to_string(entries[k].col) +
                      ") given more than once");
    }
    csr.row_ptr[entries[k].row + 1]++;
    csr.col.push_back(entries[k].col);
    csr.values.push_back(entries[k].value);
  }
  for (std::size_t i = 0; i < n; ++i) csr.row_ptr[i + 1] += csr.row_ptr[i];
  return SymmetricOperator(n, std::move(csr));
}

SymmetricOperator SymmetricOperator::diagonal(std::span<const double> d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
  return sparse(d.size(), std::move(t));
}

SymmetricOperator SymmetricOperator::callback(std::size_t n, ApplyFn fn) {
  require_dim(n, "callback");
  if (!fn) throw SpecError("callback: empty application routine");
  return SymmetricOperator(n, Callback{n, std::move(fn)});
}

SymmetricOperator::Kind SymmetricOperator::kind() const noexcept {
  switch (rep_.index()) {
    case 0:
      return Kind::kDense;
    case 1:
      return Kind::kSparse;
    default:
      return Kind::kCallback;
  }
}

Vector SymmetricOperator::apply(std::span<const double> v) const {
  Vector out(n_);
  apply(v, out);
  return out;
}

void SymmetricOperator::apply(std::span<const double> v,
                              std::span<double> out) const {
  if (v.size() != n_ || out.size() != n_) {
    throw DimensionError("apply: operator has dimension " + std::to_string(n_) +
                         ", got vector of length " + std::to_string(v.size()));
  }
  if (const auto* d = std::get_if<DenseSymmetric>(&rep_)) {
    std::fill(out.begin(), out.end(), 0.0);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      out[i] += d->upper[idx] * v[i];
      ++idx;
      for (std::size_t j = i + 1; j < n_; ++j, ++idx) {
        const double a = d->upper[idx];
        out[i] += a * v[j];
        out[j] += a * v[i];
      }
    }
    return;
  }
  if (const auto* s = std::get_if<SparseSymmetricCSR>(&rep_)) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = s->row_ptr[i]; k < s->row_ptr[i + 1]; ++k) {
        const std::size_t j = s->col[k];
        const double a = s->values[k];
        out[i] += a * v[j];
        if (j != i) out[j] += a * v[i];
      }
    }
    return;
  }
  std::get<Callback>(rep_).fn(v, out);
}

double SymmetricOperator::entry(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw DimensionError("entry: index out of range");
  if (j < i) std::swap(i, j);
  if (const auto* d = std::get_if<DenseSymmetric>(&rep_)) {
    return d->upper[packed_index(n_, i, j)];
  }
  if (const auto* s = std::get_if<SparseSymmetricCSR>(&rep_)) {
    const auto first = s->col.begin() + static_cast<std::ptrdiff_t>(s->row_ptr[i]);
    const auto last = s->col.begin() + static_cast<std::ptrdiff_t>(s->row_ptr[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it != last && *it == j) {
      return s->values[static_cast<std::size_t>(it - s->col.begin())];
    }
    return 0.0;
  }
  Vector e(n_, 0.0);
  e[j] = 1.0;
  return apply(e)[i];
}

Vector SymmetricOperator::diagonal_entries() const {
  Vector d(n_);
  for (std::size_t i = 0; i < n_; ++i) d[i] = entry(i, i);
  return d;
}

void SymmetricOperator::for_each_upper(
    const std::function<void(std::size_t, std::size_t, double)>& visit) const {
  if (const auto* d = std::get_if<DenseSymmetric>(&rep_)) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i; j < n_; ++j, ++idx) visit(i, j, d->upper[idx]);
    }
    return;
  }
  if (const auto* s = std::get_if<SparseSymmetricCSR>(&rep_)) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = s->row_ptr[i]; k < s->row_ptr[i + 1]; ++k) {
        visit(i, s->col[k], s->values[k]);
      }
    }
    return;
  }
  throw SpecError("for_each_upper: callback operators have no stored entries");
}

std::size_t SymmetricOperator::stored_entries() const {
  if (const auto* d = std::get_if<DenseSymmetric>(&rep_)) return d->upper.size();
  if (const auto* s = std::get_if<SparseSymmetricCSR>(&rep_)) return s->values.size();
  return 0;
}

}  // namespace cdkit

#include "cdkit/preconditioner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "cdkit/errors.hpp"
#include "cdkit/format.hpp"

namespace cdkit {

Preconditioner Preconditioner::identity(std::size_t n) {
  if (n == 0) throw SpecError("preconditioner: dimension must be >= 1");
  return Preconditioner(Kind::kIdentity, n, "none");
}

Preconditioner Preconditioner::jacobi(std::vector<double> d) {
  if (d.empty()) throw SpecError("jacobi: empty diagonal");
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0) || !std::isfinite(d[i])) {
      throw SpecError("jacobi: diagonal entry " + std::to_string(i) + " is " +
                      format_double(d[i]) + ", must be > 0");
    }
  }
  Preconditioner p(Kind::kJacobi, d.size(), "jacobi");
  p.d_ = std::move(d);
  return p;
}

Preconditioner Preconditioner::custom(std::size_t n, ApplyFn fn, std::string name) {
  if (n == 0) throw SpecError("preconditioner: dimension must be >= 1");
  if (!fn) throw SpecError("preconditioner: empty application routine");
  std::mt19937_64 rng(20240917);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n), w(n);
  for (int sample = 0; sample < 16; ++sample) {
    for (auto& x : v) x = normal(rng);
    fn(v, w);
    const double q = dot(v, w);
    if (!(q > 0.0)) {
      throw SpecError("preconditioner '" + name + "': v^T M v = " + format_double(q) +
                      " on sample " + std::to_string(sample) + ", not positive definite");
    }
  }
  Preconditioner p(Kind::kCustom, n, std::move(name));
  p.fn_ = std::move(fn);
  return p;
}

Preconditioner Preconditioner::from_operator(SymmetricOperator M, std::string name) {
  const std::size_t n = M.dim();
  auto shared = std::make_shared<const SymmetricOperator>(std::move(M));
  return custom(
      n, [shared](std::span<const double> in, std::span<double> out) { shared->apply(in, out); },
      std::move(name));
}

Vector Preconditioner::apply(std::span<const double> v) const {
  Vector out(n_);
  apply(v, out);
  return out;
}

void Preconditioner::apply(std::span<const double> v, std::span<double> out) const {
  if (v.size() != n_ || out.size() != n_) {
    throw DimensionError("preconditioner has dimension " + std::to_string(n_) +
                         ", got vector of length " + std::to_string(v.size()));
  }
  switch (kind_) {
    case Kind::kIdentity:
      std::copy(v.begin(), v.end(), out.begin());
      return;
    case Kind::kJacobi:
      for (std::size_t i = 0; i < n_; ++i) out[i] = v[i] / d_[i];
      return;
    case Kind::kCustom:
      fn_(v, out);
      return;
  }
}

Preconditioner jacobi_from_operator(const SymmetricOperator& A) {
  return Preconditioner::jacobi(A.diagonal_entries());
}

}  // namespace cdkit

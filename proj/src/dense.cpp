#include "cdkit/dense.hpp"

#include "cdkit/errors.hpp"

namespace cdkit {

Eigen::MatrixXd to_dense(const SymmetricOperator& A) {
  const auto n = static_cast<Eigen::Index>(A.dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (A.is_explicit()) {
    A.for_each_upper([&](std::size_t i, std::size_t j, double v) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      m(r, c) = v;
      m(c, r) = v;
    });
    return m;
  }
  Vector e(A.dim(), 0.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[static_cast<std::size_t>(j)] = 1.0;
    const Vector col = A.apply(e);
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = col[static_cast<std::size_t>(i)];
    e[static_cast<std::size_t>(j)] = 0.0;
  }
  return m;
}

Eigen::VectorXd to_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Vector from_eigen(const Eigen::VectorXd& v) { return Vector(v.data(), v.data() + v.size()); }

Vector dense_solve(const SymmetricOperator& A, std::span<const double> b) {
  if (b.size() != A.dim()) throw DimensionError("dense_solve: length mismatch");
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(to_dense(A));
  return from_eigen(lu.solve(to_eigen(b)));
}

}  // namespace cdkit

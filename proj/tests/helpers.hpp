#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "cdkit/linalg.hpp"
#include "cdkit/symmetric_operator.hpp"

namespace cdkit::testing {

// Oracles below go through Eigen on an explicit dense copy and never call
// back into the library's own dense helpers.

inline Eigen::MatrixXd eigen_dense(const SymmetricOperator& A) {
  const auto n = static_cast<Eigen::Index>(A.dim());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      M(i, j) = A.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return M;
}

inline Vector oracle_solve(const SymmetricOperator& A, const Vector& b) {
  const Eigen::VectorXd x =
      eigen_dense(A).ldlt().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), b.size()));
  return Vector(x.data(), x.data() + x.size());
}

inline Vector ones(std::size_t n) { return Vector(n, 1.0); }

inline Vector random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

inline double max_abs_diff(const Vector& x, const Vector& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

inline double rel_diff(const Vector& x, const Vector& y) {
  double d = 0.0, s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    d += (x[i] - y[i]) * (x[i] - y[i]);
    s += y[i] * y[i];
  }
  return std::sqrt(d) / std::max(1.0, std::sqrt(s));
}

inline SymmetricOperator diag(std::vector<double> d) { return SymmetricOperator::diagonal(d); }

}  // namespace cdkit::testing

#pragma once

#include <Eigen/Dense>

#include "cdkit/linalg.hpp"
#include "cdkit/symmetric_operator.hpp"

namespace cdkit {

/// Dense reference computations backing the diagnostics (exact solution,
/// inverse, determinant). Intended for n up to a few thousand.
inline constexpr std::size_t kDenseLimit = 2000;

Eigen::MatrixXd to_dense(const SymmetricOperator& A);

Eigen::VectorXd to_eigen(std::span<const double> v);
Vector from_eigen(const Eigen::VectorXd& v);

/// LU solve of A y = b.
Vector dense_solve(const SymmetricOperator& A, std::span<const double> b);

}  // namespace cdkit

#include "cdkit/test_matrices.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "cdkit/errors.hpp"

namespace cdkit {

namespace {

std::vector<double> geometric_spectrum(std::size_t n, double cond) {
  std::vector<double> d(n, 1.0);
  for (std::size_t i = 1; i < n; ++i) {
    d[i] = std::pow(cond, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return d;
}

std::vector<double> linear_spectrum(std::size_t n, double cond) {
  std::vector<double> d(n, 1.0);
  for (std::size_t i = 1; i < n; ++i) {
    d[i] = 1.0 + (cond - 1.0) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return d;
}

SymmetricOperator laplacian_1d(std::size_t n) {
  std::vector<SymmetricOperator::Triplet> t;
  t.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return SymmetricOperator::sparse(n, std::move(t));
}

SymmetricOperator random_spd(std::size_t n, double cond, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = normal(rng);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  const auto spectrum = geometric_spectrum(n, cond);
  const Eigen::VectorXd d =
      Eigen::Map<const Eigen::VectorXd>(spectrum.data(), static_cast<Eigen::Index>(n));
  const Eigen::MatrixXd a = q.transpose() * d.asDiagonal() * q;
  return SymmetricOperator::dense_from_upper(n, [&](std::size_t i, std::size_t j) {
    return a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

}  // namespace

SymmetricOperator generate_test_matrix(const TestMatrixSpec& spec) {
  if (spec.n == 0) throw SpecError("test matrix: n must be >= 1");
  if (!(spec.cond >= 1.0) || !std::isfinite(spec.cond)) {
    throw SpecError("test matrix: condition number must be finite and >= 1");
  }
  switch (spec.kind) {
    case TestMatrixSpec::Kind::kLaplacian1D:
      return laplacian_1d(spec.n);
    case TestMatrixSpec::Kind::kDiagGeometric:
      return SymmetricOperator::diagonal(geometric_spectrum(spec.n, spec.cond));
    case TestMatrixSpec::Kind::kDiagLinear:
      return SymmetricOperator::diagonal(linear_spectrum(spec.n, spec.cond));
    case TestMatrixSpec::Kind::kRandomSPD:
      return random_spd(spec.n, spec.cond, spec.seed);
  }
  throw SpecError("test matrix: unknown kind");
}

SymmetricOperator symmetric_diagonal_scaling(const SymmetricOperator& A,
                                             std::span<const double> scale) {
  if (scale.size() != A.dim()) throw DimensionError("scaling: length mismatch");
  if (A.kind() == SymmetricOperator::Kind::kDense) {
    return SymmetricOperator::dense_from_upper(A.dim(), [&](std::size_t i, std::size_t j) {
      return scale[i] * A.entry(i, j) * scale[j];
    });
  }
  std::vector<SymmetricOperator::Triplet> t;
  t.reserve(A.stored_entries());
  A.for_each_upper([&](std::size_t i, std::size_t j, double v) {
    t.push_back({i, j, scale[i] * v * scale[j]});
  });
  return SymmetricOperator::sparse(A.dim(), std::move(t));
}

}  // namespace cdkit

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cdkit/dense.hpp"
#include "cdkit/errors.hpp"
#include "cdkit/format.hpp"
#include "cdkit/matrix_market.hpp"
#include "cdkit/spectrum.hpp"
#include "cdkit/test_matrices.hpp"
#include "helpers.hpp"

using namespace cdkit;
using namespace cdkit::testing;

namespace {

SymmetricOperator laplacian(std::size_t n) {
  return generate_test_matrix({TestMatrixSpec::Kind::kLaplacian1D, n, 1.0, 0});
}

}  // namespace

TEST(Vectors, DotNormAxpy) {
  const Vector x{1, 2, 3}, y{4, 5, 6};
  EXPECT_EQ(dot(x, y), 32.0);
  EXPECT_EQ(norm_squared(x), 14.0);
  Vector z = y;
  axpy(2.0, x, z);
  EXPECT_EQ(z, (Vector{6, 9, 12}));
  EXPECT_THROW(dot(x, Vector{1, 2}), DimensionError);
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  const double v = 1.0 / 3.0;
  EXPECT_EQ(std::stod(format_double(v)), v);
}

TEST(Operator, ApplyIdentity) {
  const auto I = diag({1, 1, 1});
  EXPECT_EQ(I.apply(Vector{1, 2, 3}), (Vector{1, 2, 3}));
}

TEST(Operator, ApplyDiagonal) {
  EXPECT_EQ(diag({1, 2, 3}).apply(ones(3)), (Vector{1, 2, 3}));
}

TEST(Operator, ApplyLaplacianMatchesDenseEvaluation) {
  const auto L = laplacian(3);
  const Eigen::Matrix3d M{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}};
  const Eigen::Vector3d expect = M * Eigen::Vector3d::Ones();
  const Vector got = L.apply(ones(3));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(got[i], expect(i));
  EXPECT_EQ(got, (Vector{1, 0, 1}));
}

TEST(Operator, DimensionMismatchThrows) {
  EXPECT_THROW(diag({1, 2}).apply(ones(3)), DimensionError);
}

TEST(Operator, DenseRejectsAsymmetry) {
  EXPECT_THROW(SymmetricOperator::dense(2, Vector{1, 2, 3, 4}), SpecError);
  const auto A = SymmetricOperator::dense(2, Vector{2, 1, 1, 2});
  EXPECT_EQ(A.apply(Vector{1, 0}), (Vector{2, 1}));
}

TEST(Operator, SparseAcceptsEitherTriangleRejectsDuplicates) {
  const auto A = SymmetricOperator::sparse(2, {{0, 0, 2}, {1, 0, 1}, {1, 1, 2}});
  EXPECT_EQ(A.entry(0, 1), 1.0);
  EXPECT_EQ(A.entry(1, 0), 1.0);
  EXPECT_THROW(SymmetricOperator::sparse(2, {{0, 1, 1}, {1, 0, 1}}), SpecError);
  EXPECT_THROW(SymmetricOperator::sparse(2, {{0, 2, 1}}), DimensionError);
}

TEST(Operator, CallbackAndDensify) {
  const auto base = laplacian(4);
  const auto cb = SymmetricOperator::callback(
      4, [&](std::span<const double> v, std::span<double> out) { base.apply(v, out); });
  EXPECT_FALSE(cb.is_explicit());
  EXPECT_EQ((to_dense(cb) - eigen_dense(base)).norm(), 0.0);
}

TEST(Operator, ApplicationIsSymmetric) {
  const auto A = generate_test_matrix({TestMatrixSpec::Kind::kRandomSPD, 25, 1e3, 11});
  const double fro = eigen_dense(A).norm();
  for (unsigned s = 0; s < 5; ++s) {
    const Vector u = random_vector(25, 2 * s), v = random_vector(25, 2 * s + 1);
    const double lhs = dot(u, A.apply(v)), rhs = dot(v, A.apply(u));
    EXPECT_LE(std::abs(lhs - rhs), 1e-14 * norm(u) * norm(v) * fro);
  }
}

TEST(MatrixMarket, ReadsCoordinateLowerTriangle) {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "2 2 3\n1 1 2\n2 1 1\n2 2 2\n");
  const auto A = read_matrix_market(in);
  EXPECT_EQ(eigen_dense(A), (Eigen::Matrix2d{{2, 1}, {1, 2}}));
}

TEST(MatrixMarket, GeneralHeaderIsParseError) {
  std::istringstream in("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 1\n");
  try {
    read_matrix_market(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(MatrixMarket, IndexOutOfRangeReportsLine) {
  std::istringstream in("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n");
  try {
    read_matrix_market(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(MatrixMarket, ArrayFormat) {
  std::istringstream in("%%MatrixMarket matrix array real symmetric\n2 2\n2\n1\n3\n");
  const auto A = read_matrix_market(in);
  EXPECT_EQ(eigen_dense(A), (Eigen::Matrix2d{{2, 1}, {1, 3}}));
}

TEST(MatrixMarket, RoundTripRandomSpd) {
  const auto A = generate_test_matrix({TestMatrixSpec::Kind::kRandomSPD, 10, 50.0, 3});
  std::stringstream buf;
  write_matrix_market(A, buf);
  const auto B = read_matrix_market(buf);
  EXPECT_LE((eigen_dense(A) - eigen_dense(B)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(MatrixMarket, RoundTripSparse) {
  const auto A = laplacian(5);
  std::stringstream buf;
  write_matrix_market(A, buf);
  const auto B = read_matrix_market(buf);
  EXPECT_EQ(B.stored_entries(), 9u);
  EXPECT_EQ(eigen_dense(A), eigen_dense(B));
}

TEST(Generators, DiagGeometricTwoPoint) {
  const auto A = generate_test_matrix({TestMatrixSpec::Kind::kDiagGeometric, 2, 4.0, 0});
  EXPECT_EQ(eigen_dense(A), (Eigen::Matrix2d{{1, 0}, {0, 4}}));
}

TEST(Generators, Laplacian) {
  EXPECT_EQ(eigen_dense(laplacian(3)),
            (Eigen::Matrix3d{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}));
}

TEST(Generators, RandomSpdConditionNumber) {
  const auto A = generate_test_matrix({TestMatrixSpec::Kind::kRandomSPD, 20, 1e3, 7});
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(eigen_dense(A)).eigenvalues();
  EXPECT_NEAR(ev.minCoeff() / ev.maxCoeff(), 1e-3, 1e-9);
}

TEST(Generators, DeterministicUnderSeed) {
  const TestMatrixSpec s{TestMatrixSpec::Kind::kRandomSPD, 15, 100.0, 42};
  EXPECT_EQ(eigen_dense(generate_test_matrix(s)), eigen_dense(generate_test_matrix(s)));
  const TestMatrixSpec t{TestMatrixSpec::Kind::kRandomSPD, 15, 100.0, 43};
  EXPECT_NE(eigen_dense(generate_test_matrix(s)), eigen_dense(generate_test_matrix(t)));
}

TEST(Generators, RejectsBadSpec) {
  EXPECT_THROW(generate_test_matrix({TestMatrixSpec::Kind::kDiagGeometric, 5, 0.5, 0}), SpecError);
  EXPECT_THROW(generate_test_matrix({TestMatrixSpec::Kind::kDiagLinear, 0, 2.0, 0}), SpecError);
}

TEST(Generators, DiagonalScaling) {
  const auto A = symmetric_diagonal_scaling(laplacian(3), Vector{1, 10, 100});
  EXPECT_EQ(A.entry(0, 1), -10.0);
  EXPECT_EQ(A.entry(2, 2), 2e4);
}

TEST(Spectrum, DiagonalAndIdentity) {
  auto b = spectrum_bounds(diag({1, 4}));
  EXPECT_DOUBLE_EQ(b.lambda_min, 1.0);
  EXPECT_DOUBLE_EQ(b.lambda_max, 4.0);
  b = spectrum_bounds(diag({1, 1, 1}));
  EXPECT_DOUBLE_EQ(b.condition_number(), 1.0);
}

TEST(Spectrum, LaplacianClosedForm) {
  const auto b = spectrum_bounds(laplacian(3));
  EXPECT_NEAR(b.lambda_min, 2.0 - std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(b.lambda_max, 2.0 + std::sqrt(2.0), 1e-14);
}

TEST(Spectrum, PowerIterationRoute) {
  SpectrumOptions opt;
  opt.dense_limit = 0;
  opt.power_max_iters = 20000;
  const std::size_t n = 12;
  const auto b = spectrum_bounds(laplacian(n), opt);
  EXPECT_TRUE(b.iterative);
  const double h = std::numbers::pi / static_cast<double>(n + 1);
  EXPECT_NEAR(b.lambda_max, 2.0 - 2.0 * std::cos(n * h), 1e-5);
  EXPECT_NEAR(b.lambda_min, 2.0 - 2.0 * std::cos(h), 1e-5);
}

TEST(Spectrum, NonConvergenceCarriesPartialResult) {
  SpectrumOptions opt;
  opt.dense_limit = 0;
  opt.power_max_iters = 2;
  opt.power_tol = 1e-15;
  try {
    spectrum_bounds(laplacian(30), opt);
    FAIL() << "expected EstimateError";
  } catch (const EstimateError& e) {
    EXPECT_GT(e.partial_lambda_max(), 0.0);
  }
}

TEST(Dense, SolveMatchesOracle) {
  const auto A = generate_test_matrix({TestMatrixSpec::Kind::kRandomSPD, 10, 100.0, 1});
  EXPECT_LE(rel_diff(dense_solve(A, ones(10)), oracle_solve(A, ones(10))), 1e-12);
}

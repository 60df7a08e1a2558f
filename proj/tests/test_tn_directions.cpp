#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "cdkit/errors.hpp"
#include "cdkit/solvers.hpp"
#include "cdkit/tn_directions.hpp"
#include "helpers.hpp"

using namespace cdkit;
using namespace cdkit::testing;

namespace {

BasisBundle stored_run(const SymmetricOperator& A, const Vector& b, GammaStrategy g = GammaStrategy::minus_a(),
                       CurvaturePolicy policy = CurvaturePolicy::kAbort) {
  SolveConfig c;
  c.gamma = std::move(g);
  c.store_basis = true;
  c.curvature = policy;
  return BasisBundle::from_result(solve(A, b, {}, c), Method::kCD);
}

// diag(1,-1), b = (2,1): p_0^T A p_0 = 3, p_1 is parallel to (1,2) with
// curvature < 0.
BasisBundle indefinite_run() {
  return stored_run(diag({1, -1}), Vector{2, 1}, GammaStrategy::minus_a(),
                    CurvaturePolicy::kRecordAndContinue);
}

}  // namespace

TEST(Assemble, SpdHasNoNegativeCurvature) {
  const auto A = diag({1, 2, 5, 7});
  const auto d = assemble_directions(stored_run(A, ones(4)));
  EXPECT_TRUE(d.I_N.empty());
  EXPECT_FALSE(d.s.has_value());
  EXPECT_FALSE(d.ell.has_value());
  EXPECT_EQ(d.I_P.size(), 4u);
  EXPECT_LE(max_abs_diff(d.d_P, d.d_m), 0.0);
}

TEST(Assemble, TelescopesToIterateDifference) {
  const auto A = diag({1, 2, 5, 7, 11});
  for (auto g : {GammaStrategy::minus_a(), GammaStrategy::constant(1), GammaStrategy::plus_a()}) {
    const auto b = stored_run(A, ones(5), g);
    for (std::size_t m = 1; m <= b.directions(); ++m) {
      const auto d = assemble_directions(b, m);
      Vector diff = b.Y[m];
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= b.Y[0][i];
      EXPECT_LE(max_abs_diff(d.d_m, diff), 1e-12) << g.name() << " m=" << m;
    }
  }
}

TEST(Assemble, FullRunSolvesSystem) {
  const auto A = diag({1, 2, 5});
  const auto d = assemble_directions(stored_run(A, ones(3)));
  EXPECT_LE(max_abs_diff(d.d_m, oracle_solve(A, ones(3))), 1e-12);
}

TEST(Assemble, IndefiniteSecondStep) {
  const auto b = indefinite_run();
  ASSERT_GE(b.directions(), 2u);
  EXPECT_NEAR(b.steps[0].p_a_p, 3.0, 1e-14);
  EXPECT_LT(b.steps[1].p_a_p, 0.0);
  const auto d = assemble_directions(b, 2);
  EXPECT_EQ(d.I_P, std::vector<std::size_t>{1});
  EXPECT_EQ(d.I_N, std::vector<std::size_t>{2});
  ASSERT_TRUE(d.ell.has_value());
  EXPECT_EQ(*d.ell, 2u);
  ASSERT_TRUE(d.s.has_value());
  const double rn = b.steps[1].rnorm;
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ((*d.s)[i], b.P[1][i] / rn);
  // p_1 parallel to (1, 2)
  EXPECT_NEAR(b.P[1][1] / b.P[1][0], 2.0, 1e-13);
  Vector sum = d.d_P;
  for (std::size_t i = 0; i < 2; ++i) sum[i] += d.d_N[i];
  EXPECT_LE(max_abs_diff(sum, d.d_m), 1e-15);
}

TEST(Assemble, ZeroCurvatureFlagged) {
  BasisBundle b;
  b.P = {{1, 0}, {0, 1}};
  b.R = {{1, 1}, {0, 1}, {0, 0}};
  StepRecord s0, s1;
  s0.a = 1.0;
  s0.p_a_p = 2.0;
  s0.rnorm = std::sqrt(2.0);
  s1.a = 3.0;
  s1.p_a_p = 1e-20;
  s1.rnorm = 1.0;
  b.steps = {s0, s1};
  const auto d = assemble_directions(b);
  EXPECT_EQ(d.zero_curvature, std::vector<std::size_t>{2});
  EXPECT_EQ(d.I_P, std::vector<std::size_t>{1});
  EXPECT_TRUE(d.I_N.empty());
  EXPECT_EQ(d.d_m[1], 3.0);
  EXPECT_EQ(d.d_P[1], 0.0);
}

TEST(Assemble, EllTiesKeepSmallestIndex) {
  BasisBundle b;
  b.P = {{1, 0}, {0, 1}};
  StepRecord s;
  s.a = 1.0;
  s.p_a_p = -1.0;
  s.rnorm = 1.0;
  b.steps = {s, s};
  const auto d = assemble_directions(b);
  EXPECT_EQ(d.I_N.size(), 2u);
  EXPECT_EQ(*d.ell, 1u);
}

TEST(Assemble, Errors) {
  EXPECT_THROW(assemble_directions(BasisBundle{}), SpecError);
  const auto b = stored_run(diag({1, 2}), ones(2));
  EXPECT_THROW(assemble_directions(b, 3), SpecError);
}

TEST(QuadraticModel, HandValue) {
  // 1 + (1,-1).(2,3) + 1/2 (2*4 + 3*9)
  const auto A = diag({2, 3});
  EXPECT_DOUBLE_EQ(quadratic_model(A, Vector{1, -1}, 1.0, Vector{2, 3}), 1.0 - 1.0 + 17.5);
  EXPECT_THROW(quadratic_model(A, Vector{1}, 0.0, Vector{1, 1}), DimensionError);
}

TEST(QuadraticModel, ModelDecreasesOnSpd) {
  const auto A = diag({1, 2, 5, 9});
  const auto q = model_values(A, stored_run(A, ones(4)));
  ASSERT_EQ(q.size(), 4u);
  for (std::size_t m = 1; m < q.size(); ++m) EXPECT_LT(q[m], q[m - 1]);
  // At termination Q = -1/2 b^T A^{-1} b.
  EXPECT_NEAR(q.back(), -0.5 * (1 + 0.5 + 0.2 + 1.0 / 9.0), 1e-14);
}

TEST(Truncation, ConstantSequence) {
  const std::vector<double> q{-2, -2, -2};
  for (double alpha : {1e-6, 0.5, 1.0}) {
    const auto t = truncation_test(q, alpha);
    EXPECT_TRUE(std::isnan(t.ratios[0]));
    EXPECT_EQ(t.ratios[1], 0.0);
    ASSERT_TRUE(t.first_pass.has_value());
    EXPECT_EQ(*t.first_pass, 2u);
  }
}

TEST(Truncation, AlphaOneRestatesAverageProgress) {
  // With Q_m < 0, ratio <= 1 means the last decrease is no larger than the
  // average one. The decrease shrinks here, so m = 2 already passes.
  const std::vector<double> q{-4, -6, -7};
  const auto t = truncation_test(q, 1.0);
  EXPECT_DOUBLE_EQ(t.ratios[1], (-6.0 + 4.0) / (-6.0 / 2.0));
  EXPECT_EQ(*t.first_pass, 2u);
}

TEST(Truncation, UndefinedAtZeroModel) {
  const auto t = truncation_test(std::vector<double>{1, 0, -1}, 0.5);
  EXPECT_TRUE(t.undefined[1]);
  EXPECT_FALSE(t.undefined[2]);
}

TEST(Truncation, RejectsBadAlpha) {
  const std::vector<double> q{-1, -2};
  EXPECT_THROW(truncation_test(q, 0.0), SpecError);
  EXPECT_THROW(truncation_test(q, 1.5), SpecError);
}

TEST(Truncation, SmallDiagonalCrossCheck) {
  const auto A = diag({1, 2, 5});
  const auto b = stored_run(A, ones(3));
  const auto q = model_values(A, b);
  // Direct evaluation of Q(d^m) from the assembled directions.
  for (std::size_t m = 1; m <= 3; ++m) {
    const auto d = assemble_directions(b, m);
    Vector g = b.R[0];
    for (double& v : g) v = -v;
    EXPECT_NEAR(q[m - 1], quadratic_model(A, g, 0.0, d.d_m), 1e-15);
  }
  const auto t = truncation_test(q, 0.5);
  std::optional<std::size_t> expect;
  for (std::size_t m = 2; m <= 3 && !expect; ++m) {
    const double ratio = (q[m - 1] - q[m - 2]) / (q[m - 1] / static_cast<double>(m));
    EXPECT_DOUBLE_EQ(t.ratios[m - 1], ratio);
    if (ratio <= 0.5) expect = m;
  }
  EXPECT_EQ(t.first_pass, expect);
}

TEST(Json, Shape) {
  const auto b = indefinite_run();
  const auto j = to_json(assemble_directions(b), truncation_test(model_values(diag({1, -1}), b), 0.5));
  for (const char* key : {"d_m_norm", "|I_P|", "|I_N|", "ell", "ratios"}) {
    EXPECT_NE(j.find(key), std::string::npos) << key;
  }
}

// Seeded multi-instance properties. Each test sweeps a handful of generated
// problems and gamma rules.
#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "cdkit/cd_m.hpp"
#include "cdkit/diagnostics.hpp"
#include "cdkit/matrix_market.hpp"
#include "cdkit/solvers.hpp"
#include "cdkit/test_matrices.hpp"
#include "cdkit/tn_directions.hpp"
#include "cdkit/trace_io.hpp"
#include "helpers.hpp"

using namespace cdkit;
using namespace cdkit::testing;

namespace {

std::vector<GammaStrategy> strategies() {
  return {GammaStrategy::constant(1), GammaStrategy::plus_a(), GammaStrategy::minus_a(),
          GammaStrategy::abs_a(), GammaStrategy::neg_abs_a(), GammaStrategy::geometric_decay(0.8)};
}

SymmetricOperator instance(std::size_t n, double cond, std::uint64_t seed) {
  return generate_test_matrix({TestMatrixSpec::Kind::kRandomSPD, n, cond, seed});
}

BasisBundle stored(const SymmetricOperator& A, const Vector& b, Method m, GammaStrategy g) {
  SolveConfig c;
  c.method = m;
  c.gamma = std::move(g);
  c.store_basis = true;
  return BasisBundle::from_result(solve(A, b, {}, c), m);
}

}  // namespace

TEST(Property, EveryStrategySolvesTheSystem) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto A = instance(12, 50, seed);
    const Vector b = random_vector(12, static_cast<unsigned>(seed));
    const Vector ys = oracle_solve(A, b);
    for (const auto& g : strategies()) {
      SolveConfig c;
      c.gamma = g;
      const auto r = solve(A, b, {}, c);
      ASSERT_TRUE(r.converged()) << g.name() << " seed " << seed;
      EXPECT_LE(max_abs_diff(r.y, ys) / std::max(1.0, norm(ys)), 1e-8) << g.name() << " seed " << seed;
    }
  }
}

TEST(Property, GammaOnlyScalesDirections) {
  // p_{k+1} is fixed up to the factor gamma_k; iterates coincide.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto A = instance(10, 20, seed);
    const auto one = stored(A, ones(10), Method::kCD, GammaStrategy::constant(1));
    const auto big = stored(A, ones(10), Method::kCD, GammaStrategy::constant(-3.5));
    const std::size_t m = std::min<std::size_t>(6, std::min(one.Y.size(), big.Y.size()));
    for (std::size_t k = 0; k < m; ++k) EXPECT_LE(max_abs_diff(one.Y[k], big.Y[k]), 1e-10);
    for (std::size_t k = 1; k < std::min<std::size_t>(6, one.P.size()); ++k) {
      const double ratio = big.P[k][0] / one.P[k][0];
      for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(big.P[k][i], ratio * one.P[k][i], 1e-9 * std::abs(ratio) * norm(one.P[k]));
    }
  }
}

TEST(Property, EnergyErrorNonIncreasing) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto A = instance(15, 100, seed);
    const Vector ys = oracle_solve(A, ones(15));
    for (const auto& g : strategies()) {
      const auto b = stored(A, ones(15), Method::kCD, g);
      for (std::size_t k = 1; k < b.Y.size(); ++k) {
        const double prev = error_function(A, ys, b.Y[k - 1]);
        EXPECT_LE(error_function(A, ys, b.Y[k]), prev + 1e-14 * error_function(A, ys, b.Y[0]))
            << g.name() << " k " << k;
      }
    }
  }
}

TEST(Property, FactorizationAcrossStrategies) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto A = instance(10, 50, seed);
    for (const auto& g : strategies()) {
      const auto rep = factorization_check(stored(A, ones(10), Method::kCD, g));
      EXPECT_TRUE(rep.pass) << g.name() << " seed " << seed << " " << rep.max_violation;
    }
  }
}

TEST(Property, EpsilonPropagationCgAndCd) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto A = instance(12, 50, seed);
    for (Method m : {Method::kCG, Method::kCD}) {
      const auto rep = epsilon_propagation_check(A, stored(A, ones(12), m, GammaStrategy::minus_a()),
                                                 conjugacy_model_for(m));
      EXPECT_TRUE(rep.pass) << to_string(m) << " seed " << seed << " " << rep.max_violation;
    }
  }
}

TEST(Property, FiniteTerminationDistinctEigenvalues) {
  for (std::size_t d : {1u, 2u, 5u, 10u}) {
    Vector diag_values(30);
    for (std::size_t i = 0; i < 30; ++i) diag_values[i] = 1.0 + static_cast<double>(i % d);
    const auto A = SymmetricOperator::diagonal(diag_values);
    for (const auto& g : strategies()) {
      SolveConfig c;
      c.gamma = g;
      c.tol_rel = 1e-8;
      c.max_iters = d + 2;
      EXPECT_TRUE(solve(A, ones(30), {}, c).converged()) << g.name() << " d " << d;
    }
  }
}

TEST(Property, DirectionSplitsSumToTotal) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto A = instance(10, 30, seed);
    for (const auto& g : strategies()) {
      const auto b = stored(A, ones(10), Method::kCD, g);
      const auto d = assemble_directions(b);
      Vector sum = d.d_P;
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += d.d_N[i];
      EXPECT_LE(max_abs_diff(sum, d.d_m), 1e-12 * std::max(1.0, norm(d.d_m)));
      EXPECT_TRUE(d.I_N.empty());
    }
  }
}

TEST(Property, IdentityPreconditionerIsTransparent) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto A = instance(20, 100, seed);
    SolveConfig c;
    c.gamma = GammaStrategy::constant(1);
    const auto plain = solve(A, ones(20), {}, c);
    const auto pre = cd_m_solve(A, ones(20), {}, Preconditioner::identity(20), c);
    ASSERT_EQ(plain.trace.records.size(), pre.trace.records.size());
    for (std::size_t k = 0; k < plain.trace.records.size(); ++k) {
      EXPECT_LE(std::abs(plain.trace.records[k].rnorm - pre.trace.records[k].rnorm),
                1e-14 * plain.trace.records[0].rnorm);
    }
  }
}

TEST(Property, SerializationRoundTrips) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto A = instance(8, 10, seed);
    std::stringstream mm;
    write_matrix_market(A, mm);
    const auto B = read_matrix_market(mm);
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) EXPECT_EQ(A.entry(i, j), B.entry(i, j));
    }
    SolveConfig c;
    c.gamma = GammaStrategy::plus_a();
    const auto r = solve(A, ones(8), {}, c);
    const auto back = trace_from_json(trace_to_json(r.trace));
    ASSERT_EQ(back.records.size(), r.trace.records.size());
    for (std::size_t k = 0; k < back.records.size(); ++k) {
      EXPECT_EQ(back.records[k].rnorm, r.trace.records[k].rnorm);
      const double want = r.trace.records[k].p_a_p;
      if (std::isnan(want)) {
        EXPECT_TRUE(std::isnan(back.records[k].p_a_p)) << k;
      } else {
        EXPECT_EQ(back.records[k].p_a_p, want) << k;
      }
    }
  }
}

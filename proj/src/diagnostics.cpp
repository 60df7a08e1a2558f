#include "cdkit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cdkit/dense.hpp"
#include "cdkit/errors.hpp"
#include "cdkit/format.hpp"

namespace cdkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(double v) { return std::isfinite(v); }

double energy_norm(const SymmetricOperator& A, std::span<const double> v) {
  const Vector av = A.apply(v);
  return std::sqrt(std::max(0.0, dot(v, av)));
}

Vector difference(std::span<const double> x, std::span<const double> y) {
  require_same_size(x, y, "difference");
  Vector d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return d;
}

std::vector<Vector> apply_all(const SymmetricOperator& A, const std::vector<Vector>& vs) {
  std::vector<Vector> out;
  out.reserve(vs.size());
  for (const Vector& v : vs) out.push_back(A.apply(v));
  return out;
}

double relative_gap(double value, double reference) {
  const double scale = std::abs(reference);
  return scale > 0.0 ? std::abs(value - reference) / scale : std::abs(value);
}

}  // namespace

BasisBundle BasisBundle::from_result(const SolveResult& result, Method method) {
  if (!result.trace.has_basis()) {
    throw SpecError("bundle: the run did not store its basis (store_basis off)");
  }
  BasisBundle b;
  b.method = method;
  b.P = result.trace.directions;
  b.R = result.trace.residuals;
  b.Y = result.trace.iterates;
  b.steps = result.trace.records;
  return b;
}

ConjugacyReport conjugacy_matrix(const SymmetricOperator& A, const BasisBundle& bundle) {
  const std::size_t m = bundle.P.size();
  if (m == 0) throw SpecError("conjugacy_matrix: no directions");
  const std::vector<Vector> ap = apply_all(A, bundle.P);
  ConjugacyReport rep;
  rep.epsilon.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double e = dot(bundle.P[i], ap[j]);
      rep.epsilon(i, j) = e;
      rep.epsilon(j, i) = e;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (!(rep.epsilon(i, i) > 0.0)) {
      throw CurvatureError("conjugacy_matrix: p_" + std::to_string(i) +
                           "^T A p_" + std::to_string(i) + " is not positive");
    }
  }
  rep.normalized = rep.epsilon;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      rep.normalized(i, j) =
          rep.epsilon(i, j) / std::sqrt(rep.epsilon(i, i) * rep.epsilon(j, j));
      if (i == j) continue;
      const double v = std::abs(rep.normalized(i, j));
      rep.max_offdiag = std::max(rep.max_offdiag, v);
      const std::size_t gap = i > j ? i - j : j - i;
      if (gap <= 2) rep.max_band = std::max(rep.max_band, v);
    }
  }
  return rep;
}

OrthogonalityReport orthogonality_matrix(const BasisBundle& bundle, double zero_rel) {
  const std::size_t m = bundle.R.size();
  if (m == 0) throw SpecError("orthogonality_matrix: no residuals");
  OrthogonalityReport rep;
  rep.normalized = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(m),
                                             static_cast<Eigen::Index>(m), kNaN);
  rep.skipped.assign(m, false);
  Vector norms(m);
  for (std::size_t i = 0; i < m; ++i) norms[i] = norm(bundle.R[i]);
  for (std::size_t i = 0; i < m; ++i) {
    rep.skipped[i] = norms[i] == 0.0 || norms[i] <= zero_rel * norms[0];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (rep.skipped[i]) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (rep.skipped[j]) continue;
      const double v = dot(bundle.R[i], bundle.R[j]) / (norms[i] * norms[j]);
      rep.normalized(i, j) = v;
      if (i != j) rep.max_offdiag = std::max(rep.max_offdiag, std::abs(v));
    }
  }
  // r_{k+1} against p_0..p_k
  for (std::size_t k1 = 1; k1 < m; ++k1) {
    if (rep.skipped[k1]) continue;
    for (std::size_t j = 0; j < k1 && j < bundle.P.size(); ++j) {
      const double pn = norm(bundle.P[j]);
      if (pn == 0.0) continue;
      const double v = std::abs(dot(bundle.R[k1], bundle.P[j])) / (norms[k1] * pn);
      rep.max_residual_direction = std::max(rep.max_residual_direction, v);
    }
  }
  return rep;
}

double error_function(const SymmetricOperator& A, std::span<const double> y_star,
                      std::span<const double> y) {
  const Vector e = difference(y, y_star);
  const Vector ae = A.apply(e);
  return 0.5 * dot(e, ae);
}

double anchored_quadratic(const SymmetricOperator& A, std::span<const double> anchor,
                          std::span<const double> y) {
  return error_function(A, anchor, y);
}

double error_decrease_term(double gamma_prev, double a_prev, double rnorm, double p_a_p) {
  const double ratio = gamma_prev / a_prev;
  const double r2 = rnorm * rnorm;
  return ratio * ratio * r2 * r2 / p_a_p;
}

CheckReport error_decrease_check(const SymmetricOperator& A, const BasisBundle& bundle,
                                 std::span<const double> y_star, double threshold,
                                 double f_floor_rel) {
  CheckReport rep;
  rep.check_name = "error-decrease";
  rep.threshold = threshold;
  const double f_floor = bundle.Y.empty() ? 0.0 : f_floor_rel * error_function(A, y_star, bundle.Y[0]);
  for (std::size_t i = 1; i < bundle.P.size() && i + 1 < bundle.Y.size(); ++i) {
    StepCheck s;
    s.k = i;
    const StepRecord& prev = bundle.steps[i - 1];
    const StepRecord& cur = bundle.steps[i];
    if (prev.a == 0.0 || !finite(prev.a) || !finite(prev.gamma) || !finite(cur.p_a_p)) {
      s.skipped = true;
      s.note = "a_{i-1} zero or step scalars missing";
      rep.add(std::move(s));
      continue;
    }
    const double f_i = error_function(A, y_star, bundle.Y[i]);
    const double f_next = error_function(A, y_star, bundle.Y[i + 1]);
    s.value = f_i - f_next;
    s.reference = 0.5 * error_decrease_term(prev.gamma, prev.a, cur.rnorm, cur.p_a_p);
    if (f_i == 0.0 || f_i < f_floor) {
      // f_i - f_{i+1} cancels down to the accuracy of y* itself here.
      s.skipped = true;
      s.note = "f(y_i) below attainable accuracy";
    } else {
      s.violation = std::abs(s.value - s.reference) / f_i;
    }
    rep.add(std::move(s));
  }
  rep.finalize();
  return rep;
}

CheckReport manifold_optimality_check(const SymmetricOperator& A, const BasisBundle& bundle,
                                      std::size_t i, std::size_t samples,
                                      std::uint64_t seed, double slack) {
  if (i == 0 || i >= bundle.P.size()) {
    throw SpecError("manifold_optimality_check: need 1 <= i < number of directions");
  }
  const StepRecord& prev = bundle.steps[i - 1];
  const double a_i = bundle.steps[i].a;
  if (!finite(prev.gamma) || !finite(prev.sigma) || !finite(a_i)) {
    throw SpecError("manifold_optimality_check: step scalars missing");
  }
  const bool two_dim = i >= 2;
  const Vector& p1 = bundle.P[i - 1];
  const Vector ap1 = A.apply(p1);
  const std::size_t n = p1.size();

  auto value = [&](double b, double c) {
    Vector p(n);
    for (std::size_t t = 0; t < n; ++t) {
      p[t] = prev.gamma * ap1[t] + b * p1[t];
      if (two_dim) p[t] += c * bundle.P[i - 2][t];
    }
    Vector y = bundle.Y[i];
    axpy(a_i, p, y);
    return anchored_quadratic(A, bundle.Y[i], y);
  };

  const double b_opt = -prev.sigma;
  const double c_opt = two_dim ? -prev.omega : 0.0;
  const double best = value(b_opt, c_opt);

  CheckReport rep;
  rep.check_name = "manifold";
  rep.threshold = slack;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t s = 0; s < samples; ++s) {
    double db = 0.0;
    double dc = 0.0;
    if (s > 0) {
      db = unit(rng) * (1.0 + std::abs(b_opt));
      dc = two_dim ? unit(rng) * (1.0 + std::abs(c_opt)) : 0.0;
    }
    StepCheck st;
    st.k = s;
    st.value = value(b_opt + db, c_opt + dc);
    st.reference = best;
    st.violation = std::max(0.0, best - st.value);
    rep.add(std::move(st));
  }
  rep.finalize();
  return rep;
}

InverseApproximation inverse_approximation(const SymmetricOperator& A,
                                           const BasisBundle& bundle) {
  const std::size_t n = A.dim();
  if (bundle.P.size() < n) {
    throw IncompleteBasisError("inverse_approximation: " + std::to_string(bundle.P.size()) +
                               " directions, need " + std::to_string(n));
  }
  const auto N = static_cast<Eigen::Index>(n);
  InverseApproximation out;
  out.S = Eigen::MatrixXd::Zero(N, N);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd p = to_eigen(bundle.P[i]);
    const Vector ap = A.apply(bundle.P[i]);
    const double pap = dot(bundle.P[i], ap);
    out.S.noalias() += (p * p.transpose()) / pap;
  }
  const Eigen::MatrixXd inv = to_dense(A).partialPivLu().inverse();
  out.frobenius_rel_error = (out.S - inv).norm() / inv.norm();
  if (!bundle.R.empty()) {
    const Eigen::VectorXd r0 = to_eigen(bundle.R[0]);
    const Eigen::VectorXd exact = inv * r0;
    const double scale = exact.norm();
    out.r0_error = scale > 0.0 ? (out.S * r0 - exact).norm() / scale : 0.0;
  }
  return out;
}

DeterminantEstimate determinant_via_cd(const BasisBundle& bundle, std::size_t n) {
  if (n == 0) throw SpecError("determinant_via_cd: n must be >= 1");
  if (bundle.P.size() < n || bundle.steps.size() < n) {
    throw NotFullRankTrajectory("determinant needs " + std::to_string(n) +
                                " steps, the run produced " +
                                std::to_string(bundle.P.size()));
  }
  DeterminantEstimate out;
  double value = 1.0;
  bool plus_minus_a = true;
  double reciprocal = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const StepRecord& s = bundle.steps[i];
    if (!(s.rnorm > 0.0)) {
      throw NotFullRankTrajectory("determinant: residual " + std::to_string(i) + " vanished");
    }
    if (!finite(s.p_a_p) || !finite(s.a)) {
      throw NotFullRankTrajectory("determinant: step " + std::to_string(i) + " incomplete");
    }
    value *= s.p_a_p / (s.rnorm * s.rnorm);
    reciprocal *= 1.0 / std::abs(s.a);
    if (i + 1 < n) {
      if (!finite(s.gamma)) {
        throw NotFullRankTrajectory("determinant: gamma_" + std::to_string(i) + " missing");
      }
      const double ratio = s.a / s.gamma;
      value *= ratio * ratio;
      if (relative_gap(std::abs(s.gamma), std::abs(s.a)) > 1e-12) plus_minus_a = false;
    }
  }
  out.value = value;
  if (plus_minus_a) out.reciprocal_step_product = reciprocal;
  return out;
}

CheckReport factorization_check(const BasisBundle& bundle, double threshold) {
  CheckReport rep;
  rep.check_name = "factorization";
  rep.threshold = threshold;
  if (bundle.P.empty() || bundle.R.empty()) {
    throw SpecError("factorization_check: basis not stored");
  }
  // Largest h with p_0..p_h, nonzero r_0..r_h and complete scalars for 0..h-1.
  std::size_t h = 0;
  if (norm(bundle.R[0]) == 0.0) throw SpecError("factorization_check: r_0 = 0");
  while (h + 1 < bundle.P.size() && h + 1 < bundle.R.size()) {
    const StepRecord& s = bundle.steps[h];
    if (norm(bundle.R[h + 1]) == 0.0 || !finite(s.a) || !finite(s.gamma) ||
        !finite(s.sigma) || !finite(s.omega)) {
      rep.note = "window truncated at column " + std::to_string(h + 1);
      break;
    }
    ++h;
  }
  const std::size_t n = bundle.P[0].size();
  const auto N = static_cast<Eigen::Index>(n);
  const auto H = static_cast<Eigen::Index>(h + 1);
  Eigen::MatrixXd P(N, H), Rbar(N, H);
  Eigen::MatrixXd U1 = Eigen::MatrixXd::Identity(H, H);
  Eigen::MatrixXd U2 = Eigen::MatrixXd::Zero(H, H);
  Eigen::VectorXd D = Eigen::VectorXd::Ones(H);
  for (Eigen::Index j = 0; j < H; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double rn = norm(bundle.R[ju]);
    P.col(j) = to_eigen(bundle.P[ju]);
    Rbar.col(j) = to_eigen(bundle.R[ju]) / rn;
    U2(j, j) = j == 0 ? rn : -rn;
    if (j + 1 < H) {
      const StepRecord& s = bundle.steps[ju];
      U1(j, j + 1) = s.sigma;
      U2(j, j + 1) = rn;
      D(j + 1) = s.gamma / s.a;
    }
    if (j + 2 < H) U1(j, j + 2) = bundle.steps[ju + 1].omega;
  }
  const Eigen::MatrixXd defect = P * U1 - Rbar * U2 * D.asDiagonal();
  const double scale = P.norm();
  for (Eigen::Index j = 0; j < H; ++j) {
    StepCheck s;
    s.k = static_cast<std::size_t>(j);
    s.violation = defect.col(j).norm() / scale;
    s.value = s.violation;
    rep.add(std::move(s));
  }
  rep.max_violation = defect.norm() / scale;
  rep.finalize();
  return rep;
}

ConjugacyModel conjugacy_model_for(Method method) {
  return method == Method::kCG ? ConjugacyModel::kCG : ConjugacyModel::kCD;
}

Vector predict_conjugacy_error(const SymmetricOperator& A, const BasisBundle& bundle,
                               const Eigen::MatrixXd& epsilon, std::size_t k,
                               ConjugacyModel model) {
  const auto rows = static_cast<std::size_t>(epsilon.rows());
  const auto cols = static_cast<std::size_t>(epsilon.cols());
  if (rows <= k || cols <= k) {
    throw HistoryError("predict_conjugacy_error: epsilon lacks row " + std::to_string(k));
  }
  if (bundle.steps.size() <= k || bundle.P.size() <= k) {
    throw HistoryError("predict_conjugacy_error: no step " + std::to_string(k) + " in bundle");
  }
  auto E = [&](std::ptrdiff_t r, std::ptrdiff_t c) -> double {
    if (r < 0 || c < 0) return 0.0;
    return epsilon(r, c);
  };
  const auto K = static_cast<std::ptrdiff_t>(k);
  Vector row(k + 1, 0.0);

  if (model == ConjugacyModel::kCG) {
    const double beta = bundle.steps[k].beta;
    const double alpha = bundle.steps[k].a;
    const double beta_prev = k >= 1 ? bundle.steps[k - 1].beta : 0.0;
    if (!finite(beta) || !finite(alpha) || !finite(beta_prev)) {
      throw HistoryError("predict_conjugacy_error: CG scalars missing at step " +
                         std::to_string(k));
    }
    const Vector apk = A.apply(bundle.P[k]);
    for (std::ptrdiff_t j = 0; j <= K; ++j) {
      if (j >= K - 1) continue;
      if (j == K - 2) {
        row[static_cast<std::size_t>(j)] = (1.0 + beta) * E(K, K - 2);
        continue;
      }
      const Vector apj = A.apply(bundle.P[static_cast<std::size_t>(j)]);
      const double big_sigma = alpha * dot(apk, apj);
      row[static_cast<std::size_t>(j)] =
          (1.0 + beta) * E(K, j) - beta_prev * E(K - 1, j) - big_sigma;
    }
    return row;
  }

  auto scalar = [&](std::ptrdiff_t i, double StepRecord::*field) {
    if (i < 0) return 0.0;
    const double v = bundle.steps[static_cast<std::size_t>(i)].*field;
    if (!finite(v)) {
      throw HistoryError("predict_conjugacy_error: scalar missing at step " +
                         std::to_string(i));
    }
    return v;
  };
  const double gk = scalar(K, &StepRecord::gamma);
  const double sk = scalar(K, &StepRecord::sigma);
  const double wk = scalar(K, &StepRecord::omega);
  for (std::ptrdiff_t j = 0; j <= K; ++j) {
    double v = 0.0;
    if (j >= K - 1) {
      v = 0.0;
    } else if (j == K - 2) {
      v = gk / scalar(j, &StepRecord::gamma) * scalar(j, &StepRecord::omega) * E(K, K - 3);
    } else if (j == K - 3) {
      const double ratio = gk / scalar(j, &StepRecord::gamma);
      v = (ratio * scalar(j, &StepRecord::sigma) - sk) * E(K, K - 3) +
          ratio * scalar(j, &StepRecord::omega) * E(K, K - 4);
    } else {
      const double ratio = gk / scalar(j, &StepRecord::gamma);
      v = ratio * E(K, j + 1) + (ratio * scalar(j, &StepRecord::sigma) - sk) * E(K, j) +
          ratio * scalar(j, &StepRecord::omega) * E(K, j - 1) - wk * E(K - 1, j);
    }
    row[static_cast<std::size_t>(j)] = v;
  }
  return row;
}

CheckReport epsilon_propagation_check(const SymmetricOperator& A, const BasisBundle& bundle,
                                      ConjugacyModel model, double threshold) {
  CheckReport rep;
  rep.check_name = "epsilon-propagation";
  rep.threshold = threshold;
  if (bundle.P.size() < 2) {
    rep.note = "fewer than two directions";
    rep.finalize();
    return rep;
  }
  const ConjugacyReport conj = conjugacy_matrix(A, bundle);
  for (std::size_t k = 0; k + 1 < bundle.P.size(); ++k) {
    const Vector predicted = predict_conjugacy_error(A, bundle, conj.epsilon, k, model);
    StepCheck s;
    s.k = k + 1;
    double worst = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      const double measured = conj.epsilon(static_cast<Eigen::Index>(k + 1),
                                           static_cast<Eigen::Index>(j));
      const double gap = std::abs(predicted[j] - measured);
      if (!(gap <= worst)) {
        worst = gap;
        s.value = measured;
        s.reference = predicted[j];
      }
    }
    s.violation = worst;
    rep.add(std::move(s));
  }
  rep.finalize();
  return rep;
}

CheckReport coefficient_bounds(const BasisBundle& bundle, double lambda_min,
                               double lambda_max, double slack) {
  if (!(lambda_min > 0.0) || !(lambda_max >= lambda_min)) {
    throw SpecError("coefficient_bounds: need 0 < lambda_min <= lambda_max");
  }
  const double kappa = lambda_max / lambda_min;
  CheckReport rep;
  rep.check_name = "bounds";
  rep.threshold = slack;
  const bool cg_beta = bundle.method == Method::kCG || bundle.method == Method::kCDRed;

  // Amount by which v leaves [lo, hi], relative to the interval's magnitude.
  auto outside = [](double v, double lo, double hi) {
    const double scale = std::max({std::abs(lo), std::abs(hi), std::numeric_limits<double>::min()});
    if (v < lo) return (lo - v) / scale;
    if (v > hi) return (v - hi) / scale;
    return 0.0;
  };

  for (std::size_t k = 0; k < bundle.steps.size(); ++k) {
    const StepRecord& s = bundle.steps[k];
    if (!finite(s.gamma) || !finite(s.sigma)) continue;
    StepCheck st;
    st.k = k;
    const double g = std::abs(s.gamma);
    double v = outside(std::abs(s.sigma), g * lambda_min / kappa, g * lambda_max * kappa);
    if (k >= 1 && finite(s.omega) && k < bundle.P.size()) {
      const double gp = bundle.steps[k - 1].gamma;
      const double pk = norm_squared(bundle.P[k]);
      const double pk1 = norm_squared(bundle.P[k - 1]);
      if (finite(gp) && gp != 0.0 && pk1 > 0.0) {
        const double base = std::abs(s.gamma / gp) * pk / pk1;
        v = std::max(v, outside(std::abs(s.omega), base / kappa, base * kappa));
      }
    }
    if (cg_beta && finite(s.beta)) {
      v = std::max(v, outside(s.beta, 0.0, kappa * kappa - 1.0));
    }
    st.value = s.sigma;
    st.violation = v;
    rep.add(std::move(st));
  }
  rep.finalize();
  return rep;
}

double chebyshev_bound(double kappa, std::size_t k) {
  const double s = std::sqrt(kappa);
  return 2.0 * std::pow((s - 1.0) / (s + 1.0), static_cast<double>(k));
}

CheckReport chebyshev_bound_check(const SymmetricOperator& A, const BasisBundle& bundle,
                                  std::span<const double> y_star, double kappa,
                                  bool asserted) {
  CheckReport rep;
  rep.check_name = "chebyshev";
  rep.asserted = asserted;
  rep.threshold = 1e-12;
  if (bundle.Y.empty()) throw SpecError("chebyshev_bound_check: iterates not stored");
  const double e0 = energy_norm(A, difference(bundle.Y[0], y_star));
  if (e0 == 0.0) {
    rep.note = "y_0 = y*, nothing to bound";
    rep.finalize();
    return rep;
  }
  for (std::size_t k = 0; k < bundle.Y.size(); ++k) {
    StepCheck s;
    s.k = k;
    s.value = energy_norm(A, difference(bundle.Y[k], y_star)) / e0;
    s.reference = chebyshev_bound(kappa, k);
    s.violation = s.value - s.reference;
    rep.add(std::move(s));
  }
  rep.finalize();
  return rep;
}

CheckReport ap_gram_check(const SymmetricOperator& A, const BasisBundle& bundle,
                          double threshold) {
  CheckReport rep;
  rep.check_name = "ap-gram";
  rep.threshold = threshold;
  const std::vector<Vector> ap = apply_all(A, bundle.P);
  for (std::size_t k = 1; k < ap.size(); ++k) {
    StepCheck s;
    s.k = k;
    const double nk = norm(ap[k]);
    double worst = 0.0;
    for (std::size_t i = 0; i + 2 <= k; ++i) {
      const double v = std::abs(dot(ap[k], ap[i])) / (nk * norm(ap[i]));
      worst = std::max(worst, v);
    }
    const double g = bundle.steps[k - 1].gamma;
    if (finite(g)) {
      s.value = dot(ap[k], ap[k - 1]);
      s.reference = dot(bundle.P[k], ap[k]) / g;
      worst = std::max(worst, relative_gap(s.value, s.reference));
    }
    s.violation = worst;
    rep.add(std::move(s));
  }
  rep.finalize();
  return rep;
}

CheckReport residual_identity_check(const BasisBundle& bundle, double rnorm_floor,
                                    double threshold) {
  CheckReport rep;
  rep.check_name = "residual-identity";
  rep.threshold = threshold;
  for (std::size_t k = 1; k < bundle.P.size() && k < bundle.R.size(); ++k) {
    StepCheck s;
    s.k = k;
    const double rn = norm(bundle.R[k]);
    const StepRecord& prev = bundle.steps[k - 1];
    if (rn <= rnorm_floor || !finite(prev.gamma) || !finite(prev.a) || prev.a == 0.0) {
      s.skipped = true;
      s.note = rn <= rnorm_floor ? "residual below floor" : "step scalars missing";
      rep.add(std::move(s));
      continue;
    }
    s.value = dot(bundle.R[k], bundle.P[k]);
    s.reference = -(prev.gamma / prev.a) * rn * rn;
    s.violation = std::abs(s.value - s.reference) / (rn * norm(bundle.P[k]));
    const double prev_rp = dot(bundle.R[k - 1], bundle.P[k - 1]);
    if (!(prev.gamma * s.value * prev_rp < 0.0)) {
      s.violation = kInf;
      s.note = "sign property violated";
    }
    rep.add(std::move(s));
  }
  rep.finalize();
  return rep;
}

Vector reference_solution(const SymmetricOperator& A, std::span<const double> b) {
  return dense_solve(A, b);
}

CheckReport conjugacy_check(const SymmetricOperator& A, const BasisBundle& bundle,
                            double threshold) {
  const ConjugacyReport c = conjugacy_matrix(A, bundle);
  CheckReport rep;
  rep.check_name = "conjugacy";
  rep.threshold = threshold;
  for (Eigen::Index k = 1; k < c.normalized.rows(); ++k) {
    StepCheck s;
    s.k = static_cast<std::size_t>(k);
    s.value = c.normalized.row(k).head(k).cwiseAbs().maxCoeff();
    s.reference = 0.0;
    s.violation = s.value;
    rep.add(std::move(s));
  }
  rep.finalize();
  return rep;
}

CheckReport orthogonality_check(const BasisBundle& bundle, double threshold, double zero_rel) {
  const OrthogonalityReport o = orthogonality_matrix(bundle, zero_rel);
  CheckReport rep;
  rep.check_name = "orthogonality";
  rep.threshold = threshold;
  for (Eigen::Index k = 1; k < o.normalized.rows(); ++k) {
    StepCheck s;
    s.k = static_cast<std::size_t>(k);
    s.reference = 0.0;
    if (o.skipped[static_cast<std::size_t>(k)]) {
      s.skipped = true;
      s.note = "residual at rounding level";
    } else {
      double worst = 0.0;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (!o.skipped[static_cast<std::size_t>(j)]) worst = std::max(worst, std::abs(o.normalized(k, j)));
      }
      s.value = worst;
      s.violation = worst;
    }
    rep.add(std::move(s));
  }
  if (o.max_residual_direction > rep.max_violation) {
    rep.max_violation = o.max_residual_direction;
    rep.note = "max_violation set by r_{k+1}^T p_j";
  }
  rep.finalize();
  return rep;
}

CheckReport determinant_check(const SymmetricOperator& A, const BasisBundle& bundle,
                              double threshold, double cross_threshold) {
  const std::size_t n = A.dim();
  const DeterminantEstimate d = determinant_via_cd(bundle, n);
  const double lu = to_dense(A).partialPivLu().determinant();
  CheckReport rep;
  rep.check_name = "determinant";
  rep.threshold = threshold;
  StepCheck s;
  s.k = n;
  s.value = d.value;
  s.reference = lu;
  s.violation = relative_gap(d.value, lu);
  rep.add(std::move(s));
  rep.finalize();
  if (d.reciprocal_step_product) {
    StepCheck c;
    c.k = n;
    c.value = *d.reciprocal_step_product;
    c.reference = d.value;
    c.violation = relative_gap(c.value, c.reference);
    c.note = "prod 1/|a_i| cross-check";
    c.skipped = true;  // judged against its own threshold below
    rep.per_step.push_back(c);
    if (c.violation > cross_threshold || std::isnan(c.violation)) {
      rep.pass = false;
      rep.note = "prod 1/|a_i| cross-check exceeds " + format_double(cross_threshold);
    }
  }
  return rep;
}

CheckReport inverse_check(const SymmetricOperator& A, const BasisBundle& bundle,
                          double threshold) {
  const InverseApproximation inv = inverse_approximation(A, bundle);
  CheckReport rep;
  rep.check_name = "inverse";
  rep.threshold = threshold;
  StepCheck s;
  s.k = A.dim();
  s.value = inv.frobenius_rel_error;
  s.reference = 0.0;
  s.violation = inv.frobenius_rel_error;
  rep.add(std::move(s));
  StepCheck r0;
  r0.k = A.dim();
  r0.value = inv.r0_error;
  r0.reference = 0.0;
  r0.violation = inv.r0_error;
  r0.note = "(S - A^{-1}) r_0, reported only";
  r0.skipped = true;
  rep.add(std::move(r0));
  rep.finalize();
  return rep;
}

}  // namespace cdkit

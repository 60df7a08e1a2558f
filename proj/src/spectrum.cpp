#include "cdkit/spectrum.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <random>

#include "cdkit/dense.hpp"
#include "cdkit/errors.hpp"

namespace cdkit {

namespace {

struct PowerResult {
  double value = 0.0;
  bool converged = false;
};

/// Dominant eigenvalue of v -> shift * v + scale * A v via Rayleigh quotients.
PowerResult power_iteration(const SymmetricOperator& A, double shift, double scale,
                            double tol, std::size_t max_iters) {
  const std::size_t n = A.dim();
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  double nv = norm(v);
  for (auto& x : v) x /= nv;

  PowerResult res;
  double previous = std::numeric_limits<double>::quiet_NaN();
  Vector w(n);
  for (std::size_t it = 0; it < max_iters; ++it) {
    A.apply(v, w);
    for (std::size_t i = 0; i < n; ++i) w[i] = shift * v[i] + scale * w[i];
    res.value = dot(v, w);
    const double nw = norm(w);
    if (nw == 0.0) {
      res.converged = true;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / nw;
    if (std::abs(res.value - previous) <= tol * std::abs(res.value)) {
      res.converged = true;
      return res;
    }
    previous = res.value;
  }
  return res;
}

}  // namespace

SpectrumBounds spectrum_bounds(const SymmetricOperator& A, const SpectrumOptions& options) {
  SpectrumBounds out;
  const std::size_t n = A.dim();
  if (A.is_explicit() && n <= options.dense_limit) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_dense(A),
                                                            Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
      throw EstimateError("dense eigensolver failed", 0.0, 0.0);
    }
    out.lambda_min = es.eigenvalues().minCoeff();
    out.lambda_max = es.eigenvalues().maxCoeff();
    const double scale = std::max(std::abs(out.lambda_min), std::abs(out.lambda_max));
    out.tolerance = 10.0 * static_cast<double>(n) *
                    std::numeric_limits<double>::epsilon() * scale;
    return out;
  }

  const std::size_t max_iters =
      options.power_max_iters != 0 ? options.power_max_iters : 10 * n;
  out.iterative = true;
  const PowerResult top = power_iteration(A, 0.0, 1.0, options.power_tol, max_iters);
  out.lambda_max = top.value;
  if (!top.converged) {
    throw EstimateError("power iteration for lambda_max did not converge",
                        std::numeric_limits<double>::quiet_NaN(), top.value);
  }
  const PowerResult gap =
      power_iteration(A, top.value, -1.0, options.power_tol, max_iters);
  out.lambda_min = top.value - gap.value;
  out.tolerance = options.power_tol * std::abs(top.value);
  if (!gap.converged) {
    throw EstimateError("power iteration for lambda_min did not converge",
                        out.lambda_min, out.lambda_max);
  }
  return out;
}

}  // namespace cdkit

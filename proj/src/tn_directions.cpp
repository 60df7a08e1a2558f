#include "cdkit/tn_directions.hpp"

#include <cmath>

#include <json.hpp>

#include "cdkit/errors.hpp"

namespace cdkit {

NewtonDirections assemble_directions(const BasisBundle& bundle, std::size_t m,
                                     double zero_eps) {
  if (bundle.P.empty()) throw SpecError("assemble_directions: empty bundle");
  if (m == 0) m = bundle.P.size();
  if (m > bundle.P.size()) {
    throw SpecError("assemble_directions: m = " + std::to_string(m) + " but only " +
                    std::to_string(bundle.P.size()) + " directions stored");
  }
  const std::size_t n = bundle.P[0].size();
  NewtonDirections out;
  out.d_m.assign(n, 0.0);
  out.d_P.assign(n, 0.0);
  out.d_N.assign(n, 0.0);
  double best = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const StepRecord& s = bundle.steps[i - 1];
    const Vector& p = bundle.P[i - 1];
    axpy(s.a, p, out.d_m);
    if (std::abs(s.p_a_p) <= zero_eps * norm_squared(p)) {
      out.zero_curvature.push_back(i);
    } else if (s.p_a_p > 0.0) {
      out.I_P.push_back(i);
      axpy(s.a, p, out.d_P);
    } else {
      out.I_N.push_back(i);
      axpy(s.a, p, out.d_N);
      const double q = s.p_a_p / (s.rnorm * s.rnorm);
      if (!out.ell || q < best) {  // strict: ties keep the smallest index
        out.ell = i;
        best = q;
      }
    }
  }
  if (out.ell) {
    const std::size_t l = *out.ell;
    Vector s = bundle.P[l - 1];
    const double rn = bundle.steps[l - 1].rnorm;
    for (double& v : s) v /= rn;
    out.s = std::move(s);
  }
  return out;
}

double quadratic_model(const SymmetricOperator& A, std::span<const double> grad, double f0,
                       std::span<const double> d) {
  const Vector ad = A.apply(d);
  return f0 + dot(grad, d) + 0.5 * dot(d, ad);
}

std::vector<double> model_values(const SymmetricOperator& A, const BasisBundle& bundle,
                                 double f0) {
  if (bundle.R.empty()) throw SpecError("model_values: residuals not stored");
  Vector grad = bundle.R[0];
  for (double& v : grad) v = -v;
  std::vector<double> q;
  Vector d(grad.size(), 0.0);
  for (std::size_t i = 0; i < bundle.P.size(); ++i) {
    axpy(bundle.steps[i].a, bundle.P[i], d);
    q.push_back(quadratic_model(A, grad, f0, d));
  }
  return q;
}

TruncationResult truncation_test(std::span<const double> q_values, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw SpecError("truncation_test: alpha must lie in (0, 1]");
  }
  if (q_values.size() < 2) throw SpecError("truncation_test: need at least two values");
  TruncationResult out;
  out.ratios.assign(q_values.size(), kNaN);
  out.undefined.assign(q_values.size(), false);
  out.undefined[0] = true;
  for (std::size_t m = 2; m <= q_values.size(); ++m) {
    const double qm = q_values[m - 1];
    if (qm == 0.0) {
      out.undefined[m - 1] = true;
      continue;
    }
    const double r = (qm - q_values[m - 2]) / (qm / static_cast<double>(m));
    out.ratios[m - 1] = r;
    if (!out.first_pass && r <= alpha) out.first_pass = m;
  }
  return out;
}

std::string to_json(const NewtonDirections& dirs, const TruncationResult& trunc) {
  nlohmann::json ratios = nlohmann::json::array();
  for (double r : trunc.ratios) {
    if (std::isfinite(r)) {
      ratios.push_back(r);
    } else {
      ratios.push_back(nullptr);
    }
  }
  nlohmann::json o = {{"d_m_norm", norm(dirs.d_m)},
                      {"|I_P|", dirs.I_P.size()},
                      {"|I_N|", dirs.I_N.size()},
                      {"ell", dirs.ell ? nlohmann::json(*dirs.ell) : nlohmann::json(nullptr)},
                      {"ratios", std::move(ratios)}};
  return o.dump(2);
}

}  // namespace cdkit

#include "cdkit/solvers.hpp"

#include <cmath>
#include <string>

#include "cd_engine.hpp"
#include "cdkit/errors.hpp"

namespace cdkit {

void SolveConfig::validate() const {
  if (!(tol_rel > 0.0) || !std::isfinite(tol_rel)) {
    throw SpecError("tol_rel must be finite and > 0");
  }
  if (!(breakdown_eps >= 0.0)) throw SpecError("breakdown_eps must be >= 0");
  if (!(gamma_min >= 0.0)) throw SpecError("gamma_min must be >= 0");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kCG:
      return "cg";
    case Method::kCD:
      return "cd";
    case Method::kCDStep0b:
      return "cd-step0b";
    case Method::kCDRed:
      return "cd-red";
    case Method::kScaledCG:
      return "scaled-cg";
    case Method::kHybrid:
      return "hybrid";
  }
  return "?";
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kMaxIters:
      return "max-iters";
    case SolveStatus::kBreakdown:
      return "breakdown";
  }
  return "?";
}

std::string to_string(BreakdownKind b) {
  switch (b) {
    case BreakdownKind::kNone:
      return "none";
    case BreakdownKind::kNonPositiveCurvature:
      return "non-positive-curvature";
    case BreakdownKind::kNumericalFailure:
      return "numerical-failure";
    case BreakdownKind::kGammaUnderflow:
      return "gamma-underflow";
  }
  return "?";
}

namespace {

StepCoefficients step_coefficients(const IterationState& s, double gamma_new,
                                   double ap_sq) {
  if (s.p_a_p == 0.0) throw CurvatureError("sigma: p^T A p is zero");
  StepCoefficients c;
  c.sigma = gamma_new * ap_sq / s.p_a_p;
  if (s.k >= 2) {
    if (s.p_a_p_prev == 0.0) throw CurvatureError("omega: previous p^T A p is zero");
    c.omega = (gamma_new / s.gamma_last) * (s.p_a_p / s.p_a_p_prev);
  }
  return c;
}

/// Bookkeeping common to every solver: residual start, stopping rule,
/// breakdown guards, counters and trace storage.
class Run {
 public:
  Run(const SymmetricOperator& A, std::span<const double> b,
      std::span<const double> y0, const SolveConfig& config)
      : cfg(config), n(A.dim()), A_(A), b_(b) {
    cfg.validate();
    if (b.size() != n) {
      throw DimensionError("rhs has length " + std::to_string(b.size()) +
                           ", operator dimension is " + std::to_string(n));
    }
    if (!y0.empty() && y0.size() != n) {
      throw DimensionError("y0 has length " + std::to_string(y0.size()) +
                           ", operator dimension is " + std::to_string(n));
    }
    st.y = y0.empty() ? Vector(n, 0.0) : Vector(y0.begin(), y0.end());
    st.r.assign(n, 0.0);
    st.p.assign(n, 0.0);
    st.p_prev.assign(n, 0.0);
    st.ap.assign(n, 0.0);
    res_.b_norm = norm(b);
    max_iters_ = cfg.max_iters != 0 ? cfg.max_iters : 10 * n;
    target_ = cfg.tol_rel * res_.b_norm;
  }

  /// Computes r_0. Returns false when nothing is left to do.
  bool start() {
    if (res_.b_norm == 0.0) {
      res_.status = SolveStatus::kConverged;
      return false;
    }
    apply_a(st.y, st.r);
    for (std::size_t i = 0; i < n; ++i) st.r[i] = b_[i] - st.r[i];
    const double rn = norm(st.r);
    StepRecord rec;
    rec.k = 0;
    rec.rnorm = rn;
    res_.trace.records.push_back(rec);
    res_.final_rnorm = rn;
    if (cfg.store_basis) {
      res_.trace.residuals.push_back(st.r);
      res_.trace.iterates.push_back(st.y);
    }
    if (!std::isfinite(rn)) return fail(BreakdownKind::kNumericalFailure);
    if (rn <= target_) {
      res_.status = SolveStatus::kConverged;
      return false;
    }
    return true;
  }

  void apply_a(std::span<const double> v, std::span<double> out) {
    A_.apply(v, out);
    ++res_.operator_applications;
  }

  void count_preconditioner() { ++res_.preconditioner_applications; }

  StepRecord& record(std::size_t k) { return res_.trace.records[k]; }

  /// Guards p^T A p and stores the direction. False ends the solve.
  bool accept_direction(std::span<const double> p, double p_a_p) {
    record(res_.iters).p_a_p = p_a_p;
    if (!std::isfinite(p_a_p)) return fail(BreakdownKind::kNumericalFailure);
    if (cfg.curvature == CurvaturePolicy::kAbort) {
      if (p_a_p <= cfg.breakdown_eps * norm_squared(p)) {
        return fail(BreakdownKind::kNonPositiveCurvature);
      }
    } else if (p_a_p == 0.0) {
      return fail(BreakdownKind::kNonPositiveCurvature);
    }
    if (cfg.store_basis) res_.trace.directions.emplace_back(p.begin(), p.end());
    return true;
  }

  bool accept_scalar(double v) {
    if (!std::isfinite(v)) return fail(BreakdownKind::kNumericalFailure);
    return true;
  }

  bool accept_gamma(double g) {
    if (!std::isfinite(g)) return fail(BreakdownKind::kNumericalFailure);
    if (std::abs(g) < cfg.gamma_min || g == 0.0) return fail(BreakdownKind::kGammaUnderflow);
    return true;
  }

  /// Called once y and r hold y_{k+1}, r_{k+1}. False ends the solve.
  bool finish_step() {
    ++res_.iters;
    StepRecord rec;
    rec.k = res_.iters;
    if (cfg.recompute_residual_every != 0 &&
        res_.iters % cfg.recompute_residual_every == 0) {
      apply_a(st.y, st.r);
      for (std::size_t i = 0; i < n; ++i) st.r[i] = b_[i] - st.r[i];
      rec.residual_recomputed = true;
    }
    rec.rnorm = norm(st.r);
    res_.final_rnorm = rec.rnorm;
    res_.trace.records.push_back(rec);
    if (cfg.store_basis) {
      res_.trace.residuals.push_back(st.r);
      res_.trace.iterates.push_back(st.y);
    }
    if (!std::isfinite(rec.rnorm) || !all_finite(st.y)) {
      return fail(BreakdownKind::kNumericalFailure);
    }
    if (rec.rnorm <= target_) {
      res_.status = SolveStatus::kConverged;
      return false;
    }
    if (res_.iters >= max_iters_) {
      res_.status = SolveStatus::kMaxIters;
      return false;
    }
    return true;
  }

  std::size_t iters() const { return res_.iters; }

  SolveResult finish() {
    res_.y = std::move(st.y);
    return std::move(res_);
  }

  const SolveConfig& cfg;
  const std::size_t n;
  IterationState st;

 private:
  bool fail(BreakdownKind kind) {
    res_.status = SolveStatus::kBreakdown;
    res_.breakdown = kind;
    return false;
  }

  const SymmetricOperator& A_;
  std::span<const double> b_;
  SolveResult res_;
  std::size_t max_iters_ = 0;
  double target_ = 0.0;
};

/// Step along st.p: a = r^T p / p^T A p, y += a p, r -= a A p.
/// Expects st.ap = A st.p. Returns false when the solve ends.
bool take_step(Run& run, double a) {
  IterationState& st = run.st;
  axpy(a, st.p, st.y);
  axpy(-a, st.ap, st.r);
  return run.finish_step();
}

}  // namespace

StepCoefficients compute_step_coefficients(const IterationState& state, double gamma_new) {
  return step_coefficients(state, gamma_new, norm_squared(state.ap));
}

namespace detail {

SolveResult run_cd(const SymmetricOperator& A, std::span<const double> b,
                   std::span<const double> y0, const SolveConfig& config,
                   const Preconditioner* precond) {
  Run run(A, b, y0, config);
  if (precond != nullptr && precond->dim() != run.n) {
    throw DimensionError("preconditioner dimension does not match the operator");
  }
  if (!run.start()) return run.finish();

  IterationState& st = run.st;
  const std::size_t n = run.n;
  if (precond != nullptr) {
    precond->apply(st.r, st.p);
    run.count_preconditioner();
  } else {
    st.p = st.r;
  }
  const double r0_sq = norm_squared(st.r);
  Vector m_ap(precond != nullptr ? n : 0);
  Vector next(n);
  double ap_sq_prev = kNaN;

  for (;;) {
    const std::size_t k = run.iters();
    run.apply_a(st.p, st.ap);
    double ap_sq = 0.0;
    if (precond != nullptr) {
      precond->apply(st.ap, m_ap);
      run.count_preconditioner();
      ap_sq = dot(st.ap, m_ap);
    } else {
      ap_sq = norm_squared(st.ap);
    }
    const double p_a_p = dot(st.p, st.ap);
    if (!run.accept_direction(st.p, p_a_p)) break;
    const double a = dot(st.r, st.p) / p_a_p;
    if (!run.accept_scalar(a)) break;
    run.record(k).a = a;

    st.p_a_p_prev = st.p_a_p;
    st.p_a_p = p_a_p;
    st.a_last = a;
    st.k = k + 1;
    if (!take_step(run, a)) break;

    const bool step0b = config.method == Method::kCDStep0b && k == 0;
    const bool cg_form =
        step0b || (config.method == Method::kHybrid && config.cg_steps.count(k + 1) != 0);
    double gamma = 0.0;
    if (cg_form) {
      gamma = -a;
    } else {
      GammaContext ctx;
      ctx.k = k;
      ctx.a = a;
      ctx.p_a_p = p_a_p;
      ctx.ap_norm_sq = ap_sq;
      ctx.gamma_prev = k == 0 ? kNaN : st.gamma_last;
      ctx.p_a_p_prev = st.p_a_p_prev;
      ctx.ap_norm_sq_prev = ap_sq_prev;
      gamma = config.gamma(ctx);
    }
    if (!run.accept_gamma(gamma)) break;

    StepRecord& rec = run.record(k);
    if (step0b) {
      const double beta0 = norm_squared(st.r) / r0_sq;
      for (std::size_t i = 0; i < n; ++i) next[i] = st.r[i] + beta0 * st.p[i];
      rec.beta = beta0;
      rec.sigma = -(1.0 + beta0);
      rec.omega = 0.0;
    } else {
      const StepCoefficients c = step_coefficients(st, gamma, ap_sq);
      if (!run.accept_scalar(c.sigma) || !run.accept_scalar(c.omega)) break;
      const Vector& dir = precond != nullptr ? m_ap : st.ap;
      for (std::size_t i = 0; i < n; ++i) {
        next[i] = gamma * dir[i] - c.sigma * st.p[i] - c.omega * st.p_prev[i];
      }
      rec.sigma = c.sigma;
      rec.omega = c.omega;
    }
    rec.gamma = gamma;
    st.gamma_last = gamma;
    ap_sq_prev = ap_sq;
    std::swap(st.p_prev, st.p);
    std::swap(st.p, next);
  }
  return run.finish();
}

}  // namespace detail

SolveResult cd_solve(const SymmetricOperator& A, std::span<const double> b,
                     std::span<const double> y0, const SolveConfig& config) {
  return detail::run_cd(A, b, y0, config, nullptr);
}

SolveResult hybrid_solve(const SymmetricOperator& A, std::span<const double> b,
                         std::span<const double> y0, const SolveConfig& config) {
  SolveConfig cfg = config;
  cfg.method = Method::kHybrid;
  return detail::run_cd(A, b, y0, cfg, nullptr);
}

SolveResult cg_solve(const SymmetricOperator& A, std::span<const double> b,
                     std::span<const double> y0, const SolveConfig& config) {
  Run run(A, b, y0, config);
  if (!run.start()) return run.finish();
  IterationState& st = run.st;
  const std::size_t n = run.n;
  st.p = st.r;
  double r_sq = norm_squared(st.r);
  double beta_prev = kNaN;

  for (;;) {
    const std::size_t k = run.iters();
    run.apply_a(st.p, st.ap);
    const double p_a_p = dot(st.p, st.ap);
    if (!run.accept_direction(st.p, p_a_p)) break;
    const double alpha = dot(st.r, st.p) / p_a_p;
    if (!run.accept_scalar(alpha)) break;
    run.record(k).a = alpha;
    if (!take_step(run, alpha)) break;

    const double r_sq_new = norm_squared(st.r);
    const double beta = r_sq_new / r_sq;
    if (!run.accept_scalar(beta)) break;
    StepRecord& rec = run.record(k);
    rec.beta = beta;
    rec.gamma = -alpha;
    rec.sigma = -(1.0 + beta);
    rec.omega = k == 0 ? 0.0 : beta_prev;
    for (std::size_t i = 0; i < n; ++i) st.p[i] = st.r[i] + beta * st.p[i];
    r_sq = r_sq_new;
    beta_prev = beta;
  }
  return run.finish();
}

SolveResult cd_red_solve(const SymmetricOperator& A, std::span<const double> b,
                         std::span<const double> y0, const SolveConfig& config) {
  Run run(A, b, y0, config);
  if (!run.start()) return run.finish();
  IterationState& st = run.st;
  const std::size_t n = run.n;
  const GammaStrategy recursion = GammaStrategy::cd_red_recursion();
  st.p = st.r;
  double ap_sq_prev = kNaN;

  for (;;) {
    const std::size_t k = run.iters();
    run.apply_a(st.p, st.ap);
    const double p_a_p = dot(st.p, st.ap);
    if (!run.accept_direction(st.p, p_a_p)) break;
    const double a = dot(st.r, st.p) / p_a_p;
    if (!run.accept_scalar(a)) break;
    run.record(k).a = a;
    const double ap_sq = norm_squared(st.ap);
    st.p_a_p_prev = st.p_a_p;
    st.p_a_p = p_a_p;
    st.k = k + 1;
    if (!take_step(run, a)) break;

    GammaContext ctx;
    ctx.k = k;
    ctx.a = a;
    ctx.p_a_p = p_a_p;
    ctx.ap_norm_sq = ap_sq;
    ctx.gamma_prev = k == 0 ? kNaN : st.gamma_last;
    ctx.p_a_p_prev = st.p_a_p_prev;
    ctx.ap_norm_sq_prev = ap_sq_prev;
    const double gamma = recursion(ctx);
    if (!run.accept_gamma(gamma)) break;
    const StepCoefficients c = step_coefficients(st, gamma, ap_sq);
    const double beta = -(1.0 + c.sigma);
    if (!run.accept_scalar(beta)) break;
    StepRecord& rec = run.record(k);
    rec.gamma = gamma;
    rec.sigma = c.sigma;
    rec.omega = c.omega;
    rec.beta = beta;
    for (std::size_t i = 0; i < n; ++i) st.p[i] = st.r[i] + beta * st.p[i];
    st.gamma_last = gamma;
    ap_sq_prev = ap_sq;
  }
  return run.finish();
}

SolveResult scaled_cg_solve(const SymmetricOperator& A, std::span<const double> b,
                            std::span<const double> y0, const RhoSequence& rho,
                            const SolveConfig& config) {
  if (rho.empty()) throw SpecError("scaled CG needs a rho sequence");
  Run run(A, b, y0, config);
  if (!run.start()) return run.finish();
  IterationState& st = run.st;
  const std::size_t n = run.n;
  for (std::size_t i = 0; i < n; ++i) st.p[i] = rho[0] * st.r[i];
  double r_sq = norm_squared(st.r);
  double beta_prev = kNaN;

  for (;;) {
    const std::size_t k = run.iters();
    run.apply_a(st.p, st.ap);
    const double p_a_p = dot(st.p, st.ap);
    if (!run.accept_direction(st.p, p_a_p)) break;
    const double alpha = rho[k] * r_sq / p_a_p;
    if (!run.accept_scalar(alpha)) break;
    run.record(k).a = alpha;
    if (!take_step(run, alpha)) break;

    const double r_sq_new = norm_squared(st.r);
    const double beta = r_sq_new / (rho[k] * r_sq);
    if (!run.accept_scalar(beta)) break;
    const double rho_next = rho[k + 1];
    StepRecord& rec = run.record(k);
    rec.beta = beta;
    rec.gamma = -rho_next * alpha;
    rec.sigma = -rho_next * (beta + 1.0 / rho[k]);
    rec.omega = k == 0 ? 0.0 : rho_next * beta_prev;
    for (std::size_t i = 0; i < n; ++i) st.p[i] = rho_next * (st.r[i] + beta * st.p[i]);
    r_sq = r_sq_new;
    beta_prev = beta;
  }
  return run.finish();
}

SolveResult solve(const SymmetricOperator& A, std::span<const double> b,
                  std::span<const double> y0, const SolveConfig& config) {
  switch (config.method) {
    case Method::kCG:
      return cg_solve(A, b, y0, config);
    case Method::kCD:
    case Method::kCDStep0b:
    case Method::kHybrid:
      return cd_solve(A, b, y0, config);
    case Method::kCDRed:
      return cd_red_solve(A, b, y0, config);
    case Method::kScaledCG:
      if (config.rho.empty()) throw SpecError("scaled CG needs a rho sequence");
      return scaled_cg_solve(A, b, y0, config.rho, config);
  }
  throw SpecError("unknown method");
}

}  // namespace cdkit

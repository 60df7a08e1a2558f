#pragma once

#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "cdkit/gamma_strategy.hpp"
#include "cdkit/linalg.hpp"

namespace cdkit {

enum class Method {
  kCG,        ///< classical CG
  kCD,        ///< CD class, three-term direction recurrence
  kCDStep0b,  ///< CD with a CG-like first step
  kCDRed,     ///< CD reduced to CG form through the gamma recursion
  kScaledCG,  ///< scaled CG driven by a rho sequence
  kHybrid,    ///< CD with CG-form steps at chosen indices
};

/// What to do when p^T A p is not safely positive.
enum class CurvaturePolicy {
  kAbort,              ///< p^T A p <= breakdown_eps ||p||^2 stops the run
  kRecordAndContinue,  ///< only an exactly zero or non-finite p^T A p stops it
};

struct SolveConfig {
  Method method = Method::kCD;
  GammaStrategy gamma = GammaStrategy::minus_a();
  /// Step indices (1-based, as "Step k" builds p_k) that use the CG form.
  std::set<std::size_t> cg_steps;
  RhoSequence rho;
  /// Stop when ||r_k|| <= tol_rel ||b||.
  double tol_rel = 1e-10;
  /// 0 selects 10 n.
  std::size_t max_iters = 0;
  double breakdown_eps = 1e-14;
  double gamma_min = 1e-300;
  bool store_basis = false;
  /// Recompute r = b - A y every N steps; 0 disables.
  std::size_t recompute_residual_every = 0;
  CurvaturePolicy curvature = CurvaturePolicy::kAbort;

  /// Throws SpecError on tol_rel <= 0 or negative guards.
  void validate() const;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Scalars of step k: the step length along p_k and the coefficients that
/// build p_{k+1} = gamma_k A p_k - sigma_k p_k - omega_k p_{k-1}.
///
/// CG-form solvers record their coefficients mapped into this CD form
/// (gamma = -alpha, sigma = -(1 + beta), omega = beta_{k-1}) and keep the
/// native beta. Fields not computed at a step stay NaN; the record after
/// the last completed step only carries rnorm.
struct StepRecord {
  std::size_t k = 0;
  double rnorm = kNaN;  ///< ||r_k||
  double a = kNaN;
  double gamma = kNaN;
  double sigma = kNaN;
  double omega = kNaN;
  double p_a_p = kNaN;  ///< p_k^T A p_k
  double beta = kNaN;
  bool residual_recomputed = false;
};

struct SolveTrace {
  std::vector<StepRecord> records;
  /// p_0 .. p_{m-1}; filled only with store_basis.
  std::vector<Vector> directions;
  /// r_0 .. r_m.
  std::vector<Vector> residuals;
  /// y_0 .. y_m.
  std::vector<Vector> iterates;

  bool has_basis() const noexcept { return !residuals.empty(); }
};

enum class SolveStatus { kConverged, kMaxIters, kBreakdown };

enum class BreakdownKind {
  kNone,
  kNonPositiveCurvature,
  kNumericalFailure,
  kGammaUnderflow,
};

struct SolveResult {
  Vector y;
  SolveStatus status = SolveStatus::kMaxIters;
  BreakdownKind breakdown = BreakdownKind::kNone;
  std::size_t iters = 0;
  SolveTrace trace;
  std::size_t operator_applications = 0;
  std::size_t preconditioner_applications = 0;
  double b_norm = 0.0;
  double final_rnorm = 0.0;

  bool converged() const noexcept { return status == SolveStatus::kConverged; }
};

std::string to_string(Method m);
std::string to_string(SolveStatus s);
std::string to_string(BreakdownKind b);

}  // namespace cdkit

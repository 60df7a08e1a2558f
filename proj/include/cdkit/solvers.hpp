#pragma once

#include <span>

#include "cdkit/solve_types.hpp"
#include "cdkit/symmetric_operator.hpp"

namespace cdkit {

// All solvers take y0 of length n, or an empty span for the zero vector.
// Dimension mismatches throw DimensionError; numerical trouble is reported
// through SolveResult::status, never thrown.

/// Classical CG: p_k = r_k + beta_{k-1} p_{k-1}.
SolveResult cg_solve(const SymmetricOperator& A, std::span<const double> b,
                     std::span<const double> y0, const SolveConfig& config);

/// The CD class. Uses config.gamma; honours Method::kCDStep0b and
/// Method::kHybrid (config.cg_steps). One operator application per step.
SolveResult cd_solve(const SymmetricOperator& A, std::span<const double> b,
                     std::span<const double> y0, const SolveConfig& config);

/// CD-red: CG-shaped directions p_k = r_k + beta_{k-1} p_{k-1} with
/// beta = -(1 + sigma) and gamma from the reduction recursion.
SolveResult cd_red_solve(const SymmetricOperator& A, std::span<const double> b,
                         std::span<const double> y0, const SolveConfig& config);

/// Scaled CG with p_k = rho_k (r_k + beta_{k-1} p_{k-1}).
SolveResult scaled_cg_solve(const SymmetricOperator& A, std::span<const double> b,
                            std::span<const double> y0, const RhoSequence& rho,
                            const SolveConfig& config);

/// cd_solve with CG-form steps at config.cg_steps.
SolveResult hybrid_solve(const SymmetricOperator& A, std::span<const double> b,
                         std::span<const double> y0, const SolveConfig& config);

/// Dispatches on config.method.
SolveResult solve(const SymmetricOperator& A, std::span<const double> b,
                  std::span<const double> y0, const SolveConfig& config);

/// Rolling state of the CD recurrence at the moment p_k is built, i.e.
/// after a_{k-1}, y_k and r_k are known.
struct IterationState {
  std::size_t k = 0;       ///< index of the direction about to be built
  Vector y;                ///< y_k
  Vector r;                ///< r_k
  Vector p;                ///< p_{k-1}
  Vector p_prev;           ///< p_{k-2} (zero for k = 1)
  Vector ap;               ///< A p_{k-1}
  double a_last = kNaN;    ///< a_{k-1}
  double gamma_last = kNaN;  ///< gamma_{k-2}, the parameter that built p_{k-1}
  double p_a_p = kNaN;       ///< p_{k-1}^T A p_{k-1}
  double p_a_p_prev = kNaN;  ///< p_{k-2}^T A p_{k-2}
};

struct StepCoefficients {
  double sigma = 0.0;
  double omega = 0.0;
};

/// sigma_{k-1} = gamma_{k-1} ||A p_{k-1}||^2 / p_{k-1}^T A p_{k-1} and the
/// scalar form omega_{k-1} = (gamma_{k-1} / gamma_{k-2}) (p_{k-1}^T A p_{k-1} /
/// p_{k-2}^T A p_{k-2}), which needs no A p_{k-2}. omega is 0 when k = 1.
/// Throws CurvatureError on a zero curvature denominator.
StepCoefficients compute_step_coefficients(const IterationState& state,
                                           double gamma_new);

}  // namespace cdkit

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cdkit/report.hpp"
#include "cdkit/solve_types.hpp"
#include "cdkit/symmetric_operator.hpp"

namespace cdkit {

/// Directions, residuals and iterates of one stored run, aligned by index,
/// together with the per-step scalars.
struct BasisBundle {
  Method method = Method::kCD;
  std::vector<Vector> P;  ///< p_0 .. p_{m-1}
  std::vector<Vector> R;  ///< r_0 .. r_m
  std::vector<Vector> Y;  ///< y_0 .. y_m
  std::vector<StepRecord> steps;

  /// Throws SpecError when the run was not made with store_basis.
  static BasisBundle from_result(const SolveResult& result, Method method);

  std::size_t directions() const noexcept { return P.size(); }
};

struct ConjugacyReport {
  Eigen::MatrixXd epsilon;     ///< p_i^T A p_j
  Eigen::MatrixXd normalized;  ///< epsilon_ij / sqrt(epsilon_ii epsilon_jj)
  double max_offdiag = 0.0;
  /// max |normalized| over |i - j| in {1, 2}, the pairs CD makes conjugate
  /// explicitly.
  double max_band = 0.0;
};

/// Throws CurvatureError if some p_i^T A p_i <= 0, SpecError on an empty bundle.
ConjugacyReport conjugacy_matrix(const SymmetricOperator& A, const BasisBundle& bundle);

struct OrthogonalityReport {
  Eigen::MatrixXd normalized;  ///< r_i^T r_j / (||r_i|| ||r_j||); NaN rows for zero residuals
  std::vector<bool> skipped;
  double max_offdiag = 0.0;
  /// max over j <= k of |r_{k+1}^T p_j| / (||r_{k+1}|| ||p_j||)
  double max_residual_direction = 0.0;
};

/// Residuals with ||r_i|| <= zero_rel ||r_0|| are treated as zero (skipped):
/// at that level they are rounding noise with no direction of their own.
OrthogonalityReport orthogonality_matrix(const BasisBundle& bundle, double zero_rel = 1e-14);

/// f(y) = 1/2 (y - y*)^T A (y - y*).
double error_function(const SymmetricOperator& A, std::span<const double> y_star,
                      std::span<const double> y);

/// g(y) = 1/2 (y - y_i)^T A (y - y_i), anchored at an iterate y_i.
double anchored_quadratic(const SymmetricOperator& A, std::span<const double> anchor,
                          std::span<const double> y);

/// (gamma_{i-1} / a_{i-1})^2 ||r_i||^4 / p_i^T A p_i.
double error_decrease_term(double gamma_prev, double a_prev, double rnorm, double p_a_p);

/// Checks f(y_i) - f(y_{i+1}) = 1/2 * error_decrease_term for i >= 1.
/// Violations are relative to f(y_i). Steps with f(y_i) < f_floor_rel * f(y_0)
/// are skipped: the measured difference there is rounding noise.
CheckReport error_decrease_check(const SymmetricOperator& A, const BasisBundle& bundle,
                                 std::span<const double> y_star,
                                 double threshold = 1e-8, double f_floor_rel = 1e-14);

/// Samples (b, c) around (-sigma_{i-1}, -omega_{i-1}) and checks that the
/// recorded pair minimizes g(y_i + a_i p) over
/// p = gamma_{i-1} A p_{i-1} + b p_{i-1} + c p_{i-2} (c absent for i = 1).
CheckReport manifold_optimality_check(const SymmetricOperator& A, const BasisBundle& bundle,
                                      std::size_t i, std::size_t samples,
                                      std::uint64_t seed = 1, double slack = 1e-12);

struct InverseApproximation {
  Eigen::MatrixXd S;  ///< sum p_i p_i^T / p_i^T A p_i
  double frobenius_rel_error = 0.0;
  double r0_error = 0.0;  ///< ||(S - A^{-1}) r_0|| / ||A^{-1} r_0||
};

/// Needs at least n directions (IncompleteBasisError otherwise); the first n are used.
InverseApproximation inverse_approximation(const SymmetricOperator& A,
                                           const BasisBundle& bundle);

struct DeterminantEstimate {
  double value = 0.0;
  /// prod 1/|a_i|, filled when every gamma_i = +-a_i to rel 1e-12.
  std::optional<double> reciprocal_step_product;
};

/// det(A) from the first n steps. NotFullRankTrajectory if fewer than n
/// directions were produced or a residual among r_0..r_{n-1} vanished.
DeterminantEstimate determinant_via_cd(const BasisBundle& bundle, std::size_t n);

/// ||P U1 - Rbar U2 D||_F / ||P||_F over the longest window with nonzero
/// residuals. U1 carries sigma on the first and omega on the second
/// superdiagonal, U2 is upper bidiagonal in +-||r_i||, D = diag(1, gamma_i/a_i).
CheckReport factorization_check(const BasisBundle& bundle, double threshold = 1e-10);

enum class ConjugacyModel { kCG, kCD };

ConjugacyModel conjugacy_model_for(Method method);

/// Predicted epsilon_{k+1, j}, j = 0..k, from measured rows k and k-1 and
/// the step scalars. CG uses beta and the directly computed
/// alpha_k (A p_k)^T A p_j term; CD the five-case recursion that assumes
/// the band pairs |h - l| in {1, 2} are conjugate. Throws HistoryError when
/// epsilon lacks row k (or k-1 for k >= 1) or the bundle lacks step k.
Vector predict_conjugacy_error(const SymmetricOperator& A, const BasisBundle& bundle,
                               const Eigen::MatrixXd& epsilon, std::size_t k,
                               ConjugacyModel model);

/// Predicted vs measured rows for every k with p_{k+1} available.
CheckReport epsilon_propagation_check(const SymmetricOperator& A, const BasisBundle& bundle,
                                      ConjugacyModel model, double threshold = 1e-9);

/// Bounds on |omega_k|, |sigma_k| and (CG-form runs) beta_k in terms of
/// lambda_min, lambda_max. A relative slack absorbs rounding.
CheckReport coefficient_bounds(const BasisBundle& bundle, double lambda_min,
                               double lambda_max, double slack = 1e-10);

/// ||y_k - y*||_A / ||y_0 - y*||_A against 2((sqrt(kappa)-1)/(sqrt(kappa)+1))^k.
/// asserted = false turns the report informational (pass stays true).
CheckReport chebyshev_bound_check(const SymmetricOperator& A, const BasisBundle& bundle,
                                  std::span<const double> y_star, double kappa,
                                  bool asserted);

double chebyshev_bound(double kappa, std::size_t k);

/// |(A p_k)^T A p_i| / (||A p_k|| ||A p_i||) for i <= k-2 and the relative
/// defect of (A p_k)^T A p_{k-1} = p_k^T A p_k / gamma_{k-1}.
CheckReport ap_gram_check(const SymmetricOperator& A, const BasisBundle& bundle,
                          double threshold = 1e-8);

/// r_k^T p_k = -(gamma_{k-1}/a_{k-1}) ||r_k||^2 (relative to ||r_k|| ||p_k||)
/// and gamma_{k-1} (r_k^T p_k)(r_{k-1}^T p_{k-1}) < 0, for every k >= 1 with
/// ||r_k|| > rnorm_floor. Unpreconditioned runs only.
CheckReport residual_identity_check(const BasisBundle& bundle, double rnorm_floor,
                                    double threshold = 1e-8);

/// Report forms of the matrix checks above, one step per row k holding
/// max_{j<k} of the normalized off-diagonal entry.
CheckReport conjugacy_check(const SymmetricOperator& A, const BasisBundle& bundle,
                            double threshold = 1e-8);
/// Also folds in the residual-direction defect.
CheckReport orthogonality_check(const BasisBundle& bundle, double threshold = 1e-8,
                                double zero_rel = 1e-14);
/// Relative error against the dense LU determinant; a single step for the
/// +-a cross-check when it applies. Propagates NotFullRankTrajectory.
CheckReport determinant_check(const SymmetricOperator& A, const BasisBundle& bundle,
                              double threshold = 1e-6, double cross_threshold = 1e-10);
/// Frobenius relative error; propagates IncompleteBasisError.
CheckReport inverse_check(const SymmetricOperator& A, const BasisBundle& bundle,
                          double threshold = 1e-8);

/// Exact solution by dense LU; for the checks that need y*.
Vector reference_solution(const SymmetricOperator& A, std::span<const double> b);

}  // namespace cdkit

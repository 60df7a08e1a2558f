#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace cdkit {

/// Scalars available when gamma_k is chosen, i.e. right after a_k, y_{k+1}
/// and r_{k+1} are known. Entries referring to step k-1 are NaN at k = 0.
struct GammaContext {
  std::size_t k = 0;
  double a = 0.0;                ///< a_k
  double p_a_p = 0.0;            ///< p_k^T A p_k
  double ap_norm_sq = 0.0;       ///< ||A p_k||^2
  double gamma_prev = 0.0;       ///< gamma_{k-1}
  double p_a_p_prev = 0.0;       ///< p_{k-1}^T A p_{k-1}
  double ap_norm_sq_prev = 0.0;  ///< ||A p_{k-1}||^2
};

/// Positive scaling sequence rho_0, rho_1, ... for the scaled CG. A finite
/// list is repeated cyclically.
class RhoSequence {
 public:
  RhoSequence() = default;
  /// Throws SpecError on an empty list or any rho <= 0.
  explicit RhoSequence(std::vector<double> values);

  double operator[](std::size_t k) const;
  bool empty() const noexcept { return values_.empty(); }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Rule producing the free parameters gamma_k of the CD class.
class GammaStrategy {
 public:
  enum class Kind {
    kConstant,
    kPlusA,           ///< gamma_0 = 1, gamma_k = a_k
    kMinusA,          ///< gamma_k = -a_k (reproduces CG)
    kAbsA,            ///< gamma_0 = 1, gamma_k = |a_k|
    kNegAbsA,         ///< gamma_k = -|a_k|
    kCdRedRecursion,  ///< gamma_0 = -a_0, then the CG-reduction recursion
    kScaledCgMap,     ///< gamma_k = -rho_{k+1} a_k (reproduces scaled CG)
    kGeometricDecay,  ///< gamma_k = c^k, 0 < c < 1 (exploratory)
    kCustom,
  };

  using Rule = std::function<double(const GammaContext&)>;

  /// Throws SpecError for c == 0 or non-finite c.
  static GammaStrategy constant(double c);
  static GammaStrategy plus_a();
  static GammaStrategy minus_a();
  static GammaStrategy abs_a();
  static GammaStrategy neg_abs_a();
  static GammaStrategy cd_red_recursion();
  static GammaStrategy scaled_cg_map(RhoSequence rho);
  /// Throws SpecError unless 0 < c < 1.
  static GammaStrategy geometric_decay(double c);
  static GammaStrategy custom(Rule rule, std::string name = "custom");

  double operator()(const GammaContext& ctx) const;

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  const RhoSequence& rho() const noexcept { return rho_; }
  /// Short label in the CLI grammar ("const:1", "neg-a", ...).
  std::string name() const;

 private:
  GammaStrategy(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_ = 0.0;
  RhoSequence rho_;
  Rule rule_;
  std::string custom_name_;
};

}  // namespace cdkit

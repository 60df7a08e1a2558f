#include "cdkit/gamma_strategy.hpp"

#include <cmath>

#include "cdkit/errors.hpp"
#include "cdkit/format.hpp"

namespace cdkit {

RhoSequence::RhoSequence(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw SpecError("rho sequence is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
      throw SpecError("rho_" + std::to_string(i) + " must be finite and > 0");
    }
  }
}

double RhoSequence::operator[](std::size_t k) const {
  if (values_.empty()) throw SpecError("rho sequence is empty");
  return values_[k % values_.size()];
}

GammaStrategy GammaStrategy::constant(double c) {
  if (c == 0.0 || !std::isfinite(c)) {
    throw SpecError("constant gamma must be finite and nonzero");
  }
  return GammaStrategy(Kind::kConstant, c);
}

GammaStrategy GammaStrategy::plus_a() { return GammaStrategy(Kind::kPlusA, 0.0); }
GammaStrategy GammaStrategy::minus_a() { return GammaStrategy(Kind::kMinusA, 0.0); }
GammaStrategy GammaStrategy::abs_a() { return GammaStrategy(Kind::kAbsA, 0.0); }
GammaStrategy GammaStrategy::neg_abs_a() { return GammaStrategy(Kind::kNegAbsA, 0.0); }

GammaStrategy GammaStrategy::cd_red_recursion() {
  return GammaStrategy(Kind::kCdRedRecursion, 0.0);
}

GammaStrategy GammaStrategy::scaled_cg_map(RhoSequence rho) {
  if (rho.empty()) throw SpecError("scaled CG map needs a rho sequence");
  GammaStrategy g(Kind::kScaledCgMap, 0.0);
  g.rho_ = std::move(rho);
  return g;
}

GammaStrategy GammaStrategy::geometric_decay(double c) {
  if (!(c > 0.0 && c < 1.0)) throw SpecError("decay factor must lie in (0, 1)");
  return GammaStrategy(Kind::kGeometricDecay, c);
}

GammaStrategy GammaStrategy::custom(Rule rule, std::string name) {
  if (!rule) throw SpecError("custom gamma rule is empty");
  GammaStrategy g(Kind::kCustom, 0.0);
  g.rule_ = std::move(rule);
  g.custom_name_ = std::move(name);
  return g;
}

double GammaStrategy::operator()(const GammaContext& ctx) const {
  switch (kind_) {
    case Kind::kConstant:
      return param_;
    case Kind::kPlusA:
      return ctx.k == 0 ? 1.0 : ctx.a;
    case Kind::kMinusA:
      return -ctx.a;
    case Kind::kAbsA:
      return ctx.k == 0 ? 1.0 : std::abs(ctx.a);
    case Kind::kNegAbsA:
      return -std::abs(ctx.a);
    case Kind::kCdRedRecursion:
      if (ctx.k == 0) return -ctx.a;
      return -(ctx.gamma_prev * ctx.gamma_prev * ctx.ap_norm_sq_prev +
               ctx.gamma_prev * ctx.p_a_p_prev) /
             ctx.p_a_p;
    case Kind::kScaledCgMap:
      return -rho_[ctx.k + 1] * ctx.a;
    case Kind::kGeometricDecay:
      return std::pow(param_, static_cast<double>(ctx.k));
    case Kind::kCustom:
      return rule_(ctx);
  }
  return 0.0;
}

std::string GammaStrategy::name() const {
  switch (kind_) {
    case Kind::kConstant:
      return "const:" + format_double(param_);
    case Kind::kPlusA:
      return "a";
    case Kind::kMinusA:
      return "neg-a";
    case Kind::kAbsA:
      return "abs-a";
    case Kind::kNegAbsA:
      return "neg-abs-a";
    case Kind::kCdRedRecursion:
      return "red";
    case Kind::kScaledCgMap:
      return "scaled";
    case Kind::kGeometricDecay:
      return "decay:" + format_double(param_);
    case Kind::kCustom:
      return custom_name_;
  }
  return "?";
}

}  // namespace cdkit

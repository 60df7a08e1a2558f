#include "cdkit/cd_m.hpp"

#include "cd_engine.hpp"

namespace cdkit {

SolveResult cd_m_solve(const SymmetricOperator& A, std::span<const double> b,
                       std::span<const double> y0, const Preconditioner& M,
                       const SolveConfig& config) {
  return detail::run_cd(A, b, y0, config, &M);
}

}  // namespace cdkit

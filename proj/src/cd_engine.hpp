#pragma once

#include <span>

#include "cdkit/preconditioner.hpp"
#include "cdkit/solve_types.hpp"
#include "cdkit/symmetric_operator.hpp"

namespace cdkit::detail {

/// CD recurrence shared by cd_solve, hybrid_solve and cd_m_solve. With a
/// preconditioner, p_0 = M r_0 and A p is replaced by M A p in the direction
/// update (and ||Ap||^2 by (Ap)^T M (Ap) in sigma).
SolveResult run_cd(const SymmetricOperator& A, std::span<const double> b,
                   std::span<const double> y0, const SolveConfig& config,
                   const Preconditioner* precond);

}  // namespace cdkit::detail

#pragma once

#include <span>

#include "cdkit/preconditioner.hpp"
#include "cdkit/solve_types.hpp"
#include "cdkit/symmetric_operator.hpp"

namespace cdkit {

/// Preconditioned CD. p_0 = M r_0 and
/// p_k = gamma_{k-1} M A p_{k-1} - sigma_{k-1} p_{k-1} - omega_{k-1} p_{k-2},
/// sigma_{k-1} = gamma_{k-1} (A p_{k-1})^T M (A p_{k-1}) / p_{k-1}^T A p_{k-1}.
/// a and omega use the unpreconditioned formulas. With the identity this is
/// cd_solve step for step. One M product per step plus one for p_0.
SolveResult cd_m_solve(const SymmetricOperator& A, std::span<const double> b,
                       std::span<const double> y0, const Preconditioner& M,
                       const SolveConfig& config);

}  // namespace cdkit

#pragma once

#include <filesystem>
#include <iosfwd>

#include "cdkit/symmetric_operator.hpp"

namespace cdkit {

/// Reads "%%MatrixMarket matrix coordinate real symmetric" (sparse result)
/// or "... array real symmetric" (dense result). Coordinate entries may sit
/// in either triangle. Anything else is a ParseError carrying the line.
SymmetricOperator read_matrix_market(const std::filesystem::path& path);
SymmetricOperator read_matrix_market(std::istream& in);

/// Sparse operators are written in coordinate form (upper triangle, 1-based),
/// dense ones in array form. Values use shortest round-trip text.
void write_matrix_market(const SymmetricOperator& A,
                         const std::filesystem::path& path);
void write_matrix_market(const SymmetricOperator& A, std::ostream& out);

}  // namespace cdkit

#pragma once

#include <filesystem>
#include <iosfwd>

#include "rbskm/sparse_matrix.hpp"

namespace rbskm {

/// Reads a real Matrix Market file in coordinate or array layout.
///
/// Accepted fields are `real`, `double` and `integer`; symmetry may be
/// `general`, `symmetric` or `skew-symmetric` (off-diagonal entries are
/// mirrored, negated for skew). Indices are converted to 0-based and
/// duplicate coordinates are summed. Any defect raises ParseError carrying
/// the offending line number.
SparseMatrix load_matrix_market(std::istream& in);
SparseMatrix load_matrix_market(const std::filesystem::path& path);

/// Reads a dense vector stored as an m x 1 array (or coordinate) file, as
/// shipped with right-hand sides in the SuiteSparse collection.
Vector load_vector_market(std::istream& in);
Vector load_vector_market(const std::filesystem::path& path);

/// Writes `a` as `coordinate real general` with round-trip precision.
void write_matrix_market(std::ostream& out, const SparseMatrix& a);

}  // namespace rbskm

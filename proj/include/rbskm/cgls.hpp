#pragma once

#include <algorithm>
#include <optional>
#include <span>

#include "rbskm/sparse_matrix.hpp"

namespace rbskm {

struct InnerSolveConfig {
  /// Stop once |B^T (rhs - B d)| <= rel_tol |B^T rhs|.
  double rel_tol = 1e-8;
  /// Iteration cap; unset means min(block rows, n) + 10.
  std::optional<std::size_t> max_inner_iter;

  std::size_t resolved_cap(std::size_t block_rows, std::size_t n) const {
    return max_inner_iter ? *max_inner_iter : std::min(block_rows, n) + 10;
  }
  void validate() const;
};

struct InnerSolveStats {
  std::size_t iterations = 0;
  double final_relative_residual = 0.0;
  /// Block had no nonzero entry; d was returned as zero.
  bool degenerate = false;
};

struct InnerSolveResult {
  Vector d;
  InnerSolveStats stats;
};

/// Minimum-norm least-squares solution of B d ~= rhs by CGLS.
///
/// Always starts from d = 0, so every iterate stays in range(B^T) and the
/// limit is B^+ rhs. No pseudoinverse is formed.
InnerSolveResult cgls_min_norm(const RowBlock& block, std::span<const double> rhs,
                               const InnerSolveConfig& cfg = {});

}  // namespace rbskm

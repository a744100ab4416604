#pragma once

#include <cstdint>

namespace rbskm {

/// Inputs of the per-iteration operation count.
struct OpCountInputs {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t beta = 0;
  std::uint64_t delta = 0;
  std::uint64_t nnz_block = 0;  ///< nnz of the selected block A_I
  std::uint64_t it1 = 0;        ///< inner CGLS iterations
};

enum class OpCountMethod {
  RbSkm,           ///< selection over a beta-sample
  FullScanGreedy,  ///< selection over all m rows
};

/// Operations of one iteration:
///   2mn + n + 2s + (2 nnz(A_I) + 3n + 2 delta) IT1 + 2 n delta,
/// where s = beta for RbSkm and s = m for FullScanGreedy.
constexpr std::uint64_t op_count(const OpCountInputs& in, OpCountMethod method) {
  const std::uint64_t scan = method == OpCountMethod::RbSkm ? in.beta : in.m;
  return 2 * in.m * in.n + in.n + 2 * scan +
         (2 * in.nnz_block + 3 * in.n + 2 * in.delta) * in.it1 + 2 * in.n * in.delta;
}

}  // namespace rbskm

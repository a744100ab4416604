#pragma once

#include <cstdint>
#include <optional>

#include "rbskm/sparse_matrix.hpp"

namespace rbskm {

enum class SpectrumMethod { PowerIteration, DenseExact };

/// Extremal eigenvalues of A^T A.
struct SpectrumEstimate {
  double lambda_max = 0.0;
  /// Smallest eigenvalue above the rank cutoff; only when a dense
  /// decomposition was affordable.
  std::optional<double> lambda_min_plus;
  /// DenseExact when lambda_min_plus came from a dense decomposition.
  SpectrumMethod method = SpectrumMethod::PowerIteration;
  std::size_t iterations_used = 0;
  double tolerance = 0.0;
};

struct SpectrumOptions {
  double tol = 1e-10;
  std::size_t max_iter = 5000;
  std::uint64_t seed = 0;
  /// lambda_min_plus is computed only when min(m, n) is at most this.
  std::size_t dense_threshold = 2000;
  /// Eigenvalues at or below rank_cutoff * lambda_max count as zero.
  double rank_cutoff = 1e-12;
};

/// Power iteration for lambda_max(A^T A), plus a dense eigen-decomposition
/// of the smaller Gram matrix for lambda_min_plus when small enough.
/// Throws DegenerateInputError on an all-zero matrix.
SpectrumEstimate estimate_spectrum(const SparseMatrix& a, const SpectrumOptions& opts = {});

inline const char* to_string(SpectrumMethod m) {
  return m == SpectrumMethod::PowerIteration ? "power-iteration" : "dense-exact";
}

}  // namespace rbskm

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rbskm/linear_system.hpp"
#include "rbskm/sparse_matrix.hpp"

namespace rbskm {

enum class GeneratorKind { Gaussian, SparseRandom };

/// Parameters of a synthetic test matrix (m >= n).
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Gaussian;
  Index m = 0;
  Index n = 0;
  double sigma = 1.0;    ///< entry std-dev, Gaussian only
  double density = 0.2;  ///< fraction of nonzeros, sparse-random only
  std::uint64_t seed = 0;

  /// Throws ArgumentError when the invariants do not hold.
  void validate() const;
  /// Stable textual form, e.g. "sparse-random(m=2000,n=500,density=0.2,seed=1)".
  std::string describe() const;
};

/// Gaussian: dense i.i.d. N(0, sigma^2) entries. Sparse-random: each entry is
/// nonzero with probability `density`, nonzeros i.i.d. N(0, 1).
/// Same GeneratorSpec (seed included) gives the same matrix.
SparseMatrix generate(const GeneratorSpec& spec);

/// b = A x_star with x_star i.i.d. standard normal drawn from `seed`.
LinearSystem make_consistent_system(const SparseMatrix& a, std::uint64_t seed,
                                    std::string label = {});

/// Same, with a caller-chosen x_star.
LinearSystem make_consistent_system(const SparseMatrix& a, const Vector& x_star,
                                    std::string label = {});

const char* to_string(GeneratorKind k);

}  // namespace rbskm

#pragma once

#include <span>
#include <vector>

#include "rbskm/rng.hpp"
#include "rbskm/sparse_matrix.hpp"

namespace rbskm {

/// Distinct row indices drawn from [0, universe), kept in ascending order.
class IndexSet {
 public:
  IndexSet() = default;
  /// Sorts `indices`; throws ArgumentError on duplicates or out-of-range entries.
  IndexSet(std::vector<Index> indices, Index universe);
  /// {0, 1, ..., universe - 1}
  static IndexSet all(Index universe);

  std::span<const Index> indices() const noexcept { return indices_; }
  const std::vector<Index>& vec() const noexcept { return indices_; }
  Index universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  Index operator[](std::size_t k) const { return indices_[k]; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(Index i) const;
  bool is_subset_of(const IndexSet& other) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<Index> indices_;
  Index universe_ = 0;
};

/// Uniformly random beta-subset of [0, m) (Floyd's algorithm: exactly beta
/// draws, O(beta) expected work). beta == m returns every index and leaves
/// `rng` untouched. Throws ArgumentError unless 1 <= beta <= m.
IndexSet sample_uniform_subset(Index m, Index beta, RngStream& rng);

/// The `delta` rows of `rows` with the largest `abs_values` (aligned with
/// `rows`). Ties go to the smaller row index. Expected O(|rows|).
/// Throws ArgumentError unless 1 <= delta <= |rows|.
IndexSet top_delta(std::span<const double> abs_values, const IndexSet& rows, Index delta);

/// Value of the delta-th largest entry (1-based). Expected O(|values|).
double kth_largest(std::span<const double> values, Index delta);

}  // namespace rbskm

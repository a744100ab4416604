#include "rbskm/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "rbskm/error.hpp"

namespace rbskm {

IndexSet::IndexSet(std::vector<Index> indices, Index universe)
    : indices_(std::move(indices)), universe_(universe) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw ArgumentError("IndexSet: duplicate index");
  if (!indices_.empty() && indices_.back() >= universe_)
    throw ArgumentError("IndexSet: index " + std::to_string(indices_.back()) +
                        " outside universe of size " + std::to_string(universe_));
}

IndexSet IndexSet::all(Index universe) {
  std::vector<Index> idx(universe);
  std::iota(idx.begin(), idx.end(), Index{0});
  return IndexSet(std::move(idx), universe);
}

bool IndexSet::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

IndexSet sample_uniform_subset(Index m, Index beta, RngStream& rng) {
  if (beta < 1 || beta > m)
    throw ArgumentError("sample_uniform_subset: need 1 <= beta <= m (beta=" +
                        std::to_string(beta) + ", m=" + std::to_string(m) + ")");
  if (beta == m) return IndexSet::all(m);

  std::unordered_set<Index> chosen;
  chosen.reserve(2 * beta);
  std::vector<Index> out;
  out.reserve(beta);
  for (Index j = m - beta; j < m; ++j) {
    const Index t = rng.uniform_below(j + 1);
    const Index pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    out.push_back(pick);
  }
  return IndexSet(std::move(out), m);
}

IndexSet top_delta(std::span<const double> abs_values, const IndexSet& rows, Index delta) {
  if (abs_values.size() != rows.size())
    throw ArgumentError("top_delta: values and rows differ in length");
  if (delta < 1 || delta > rows.size())
    throw ArgumentError("top_delta: need 1 <= delta <= " + std::to_string(rows.size()));
  if (delta == rows.size()) return rows;

  std::vector<std::size_t> pos(rows.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  // strict total order: larger value first, then smaller row index
  // (rows are ascending, so position order is row order)
  auto before = [&](std::size_t a, std::size_t b) {
    return abs_values[a] != abs_values[b] ? abs_values[a] > abs_values[b] : a < b;
  };
  std::nth_element(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(delta - 1), pos.end(),
                   before);
  std::vector<Index> out;
  out.reserve(delta);
  for (Index k = 0; k < delta; ++k) out.push_back(rows[pos[k]]);
  return IndexSet(std::move(out), rows.universe());
}

double kth_largest(std::span<const double> values, Index delta) {
  if (delta < 1 || delta > values.size())
    throw ArgumentError("kth_largest: need 1 <= delta <= " + std::to_string(values.size()));
  std::vector<double> v(values.begin(), values.end());
  auto nth = v.begin() + static_cast<std::ptrdiff_t>(delta - 1);
  std::nth_element(v.begin(), nth, v.end(), std::greater<>());
  return *nth;
}

}  // namespace rbskm

#pragma once

#include <optional>
#include <string>

#include "rbskm/sparse_matrix.hpp"

namespace rbskm {

/// Consistent system A x = b, optionally with the solution that generated b.
class LinearSystem {
 public:
  /// Throws ArgumentError if b or x_star have the wrong length, or if
  /// |b - A x_star| > 1e-10 (1 + |b|).
  LinearSystem(SparseMatrix a, Vector b, std::optional<Vector> x_star = std::nullopt,
               std::string label = {});

  const SparseMatrix& a() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  const std::optional<Vector>& x_star() const noexcept { return x_star_; }
  const std::string& label() const noexcept { return label_; }
  Index rows() const noexcept { return a_.rows(); }
  Index cols() const noexcept { return a_.cols(); }

  /// Where b came from: "file", "generated", or "given".
  const std::string& rhs_source() const noexcept { return rhs_source_; }
  void set_rhs_source(std::string s) { rhs_source_ = std::move(s); }

 private:
  SparseMatrix a_;
  Vector b_;
  std::optional<Vector> x_star_;
  std::string label_;
  std::string rhs_source_ = "given";
};

}  // namespace rbskm

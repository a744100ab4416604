#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rbskm {

using Index = std::size_t;
using Vector = std::vector<double>;

/// (row, col, value) entry used to assemble a SparseMatrix.
struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Read-only view of one stored row.
struct RowView {
  std::span<const Index> cols;
  std::span<const double> values;

  double dot(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) s += values[k] * x[cols[k]];
    return s;
  }
  /// y += alpha * row^T
  void axpy(double alpha, std::span<double> y) const {
    for (std::size_t k = 0; k < cols.size(); ++k) y[cols[k]] += alpha * values[k];
  }
};

/// Compressed sparse row matrix with cached squared row norms.
///
/// Immutable once built. Explicitly stored zeros are kept so that a matrix
/// written out and read back is identical entry for entry.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Validating constructor from raw CSR arrays.
  SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_ptr,
               std::vector<Index> col_idx, std::vector<double> values);

  /// Assemble from triplets in any order; duplicates are summed.
  static SparseMatrix from_triplets(Index nrows, Index ncols,
                                    std::vector<Triplet> entries);

  /// Keeps only nonzero entries of `dense`.
  static SparseMatrix from_dense(const Eigen::MatrixXd& dense);

  static SparseMatrix identity(Index n);

  Index rows() const noexcept { return nrows_; }
  Index cols() const noexcept { return ncols_; }
  Index nnz() const noexcept { return values_.size(); }

  RowView row(Index i) const {
    const Index b = row_ptr_[i], e = row_ptr_[i + 1];
    return {std::span<const Index>(col_idx_).subspan(b, e - b),
            std::span<const double>(values_).subspan(b, e - b)};
  }
  Index row_nnz(Index i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  double row_norm_sq(Index i) const { return row_norms_sq_[i]; }

  std::span<const Index> row_ptr() const noexcept { return row_ptr_; }
  std::span<const Index> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> row_norms_sq() const noexcept { return row_norms_sq_; }

  /// True if every stored value is exactly zero (or nothing is stored).
  bool is_zero() const;

  /// A * x
  Vector matvec(std::span<const double> x) const;
  /// out = A * x without allocating.
  void matvec(std::span<const double> x, std::span<double> out) const;
  /// A^T * y
  Vector matvec_t(std::span<const double> y) const;

  Eigen::MatrixXd to_dense() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  void compute_row_norms();

  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
  std::vector<double> row_norms_sq_;
};

/// Ordered selection of rows of a parent matrix; the rows are not copied.
///
/// The parent must outlive the block.
class RowBlock {
 public:
  RowBlock(const SparseMatrix& parent, std::vector<Index> rows);

  const SparseMatrix& parent() const noexcept { return *parent_; }
  std::span<const Index> rows() const noexcept { return rows_; }
  Index size() const noexcept { return rows_.size(); }
  Index cols() const noexcept { return parent_->cols(); }
  RowView row(Index local) const { return parent_->row(rows_[local]); }
  Index nnz() const;
  bool is_zero() const;

  /// A_I * x, one entry per block row.
  Vector matvec(std::span<const double> x) const;
  void matvec(std::span<const double> x, std::span<double> out) const;
  /// A_I^T * y
  Vector matvec_t(std::span<const double> y) const;
  void matvec_t(std::span<const double> y, std::span<double> out) const;

  Eigen::MatrixXd to_dense() const;

 private:
  const SparseMatrix* parent_;
  std::vector<Index> rows_;
};

/// Restriction of `a` to the rows `idx`, in the given order.
/// Throws ArgumentError on an out-of-range or repeated index.
RowBlock row_gather(const SparseMatrix& a, std::vector<Index> idx);

double dot(std::span<const double> a, std::span<const double> b);
double norm2_sq(std::span<const double> a);
double norm2(std::span<const double> a);

}  // namespace rbskm

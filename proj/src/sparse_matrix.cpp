#include "rbskm/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbskm/error.hpp"

namespace rbskm {

namespace {

void check_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want)
    throw ArgumentError(std::string(what) + ": expected length " +
                        std::to_string(want) + ", got " + std::to_string(got));
}

}  // namespace

SparseMatrix::SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_ptr,
                           std::vector<Index> col_idx, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (row_ptr_.size() != nrows_ + 1 || row_ptr_.front() != 0)
    throw ArgumentError("SparseMatrix: row_ptr must have nrows+1 entries starting at 0");
  if (col_idx_.size() != values_.size() || row_ptr_.back() != values_.size())
    throw ArgumentError("SparseMatrix: row_ptr.back() must equal nnz");
  for (Index i = 0; i < nrows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i])
      throw ArgumentError("SparseMatrix: row_ptr is decreasing at row " + std::to_string(i));
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      if (col_idx_[k] >= ncols_)
        throw ArgumentError("SparseMatrix: column index out of range in row " +
                            std::to_string(i));
      if (k > row_ptr_[i] && col_idx_[k] <= col_idx_[k - 1])
        throw ArgumentError("SparseMatrix: columns not strictly increasing in row " +
                            std::to_string(i));
    }
  }
  compute_row_norms();
}

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols,
                                         std::vector<Triplet> entries) {
  for (const auto& t : entries)
    if (t.row >= nrows || t.col >= ncols)
      throw ArgumentError("from_triplets: entry (" + std::to_string(t.row) + ", " +
                          std::to_string(t.col) + ") out of bounds");
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  std::vector<Index> row_ptr(nrows + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++row_ptr[t.row + 1];
  }
  for (Index i = 0; i < nrows; ++i) row_ptr[i + 1] += row_ptr[i];
  return SparseMatrix(nrows, ncols, std::move(row_ptr), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense) {
  const auto m = static_cast<Index>(dense.rows());
  const auto n = static_cast<Index>(dense.cols());
  std::vector<Index> row_ptr(m + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double v = dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v != 0.0) {
        cols.push_back(j);
        vals.push_back(v);
      }
    }
    row_ptr[i + 1] = cols.size();
  }
  return SparseMatrix(m, n, std::move(row_ptr), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Index> row_ptr(n + 1), cols(n);
  for (Index i = 0; i <= n; ++i) row_ptr[i] = i;
  for (Index i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(row_ptr), std::move(cols), std::vector<double>(n, 1.0));
}

void SparseMatrix::compute_row_norms() {
  row_norms_sq_.assign(nrows_, 0.0);
  for (Index i = 0; i < nrows_; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * values_[k];
    row_norms_sq_[i] = s;
  }
}

bool SparseMatrix::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

Vector SparseMatrix::matvec(std::span<const double> x) const {
  Vector y(nrows_);
  matvec(x, y);
  return y;
}

void SparseMatrix::matvec(std::span<const double> x, std::span<double> out) const {
  check_length(x.size(), ncols_, "matvec input");
  check_length(out.size(), nrows_, "matvec output");
  for (Index i = 0; i < nrows_; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    out[i] = s;
  }
}

Vector SparseMatrix::matvec_t(std::span<const double> y) const {
  check_length(y.size(), nrows_, "matvec_t input");
  Vector out(ncols_, 0.0);
  for (Index i = 0; i < nrows_; ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out[col_idx_[k]] += values_[k] * yi;
  }
  return out;
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nrows_),
                                            static_cast<Eigen::Index>(ncols_));
  for (Index i = 0; i < nrows_; ++i)
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col_idx_[k])) = values_[k];
  return d;
}

// ---------------------------------------------------------------------------

RowBlock::RowBlock(const SparseMatrix& parent, std::vector<Index> rows)
    : parent_(&parent), rows_(std::move(rows)) {}

RowBlock row_gather(const SparseMatrix& a, std::vector<Index> idx) {
  std::vector<char> seen(a.rows(), 0);
  for (Index i : idx) {
    if (i >= a.rows())
      throw ArgumentError("row_gather: row " + std::to_string(i) + " out of range");
    if (seen[i]++)
      throw ArgumentError("row_gather: row " + std::to_string(i) + " repeated");
  }
  return RowBlock(a, std::move(idx));
}

Index RowBlock::nnz() const {
  Index s = 0;
  for (Index i : rows_) s += parent_->row_nnz(i);
  return s;
}

bool RowBlock::is_zero() const {
  return std::all_of(rows_.begin(), rows_.end(),
                     [this](Index i) { return parent_->row_norm_sq(i) == 0.0; });
}

Vector RowBlock::matvec(std::span<const double> x) const {
  Vector y(rows_.size());
  matvec(x, y);
  return y;
}

void RowBlock::matvec(std::span<const double> x, std::span<double> out) const {
  check_length(x.size(), cols(), "block matvec input");
  check_length(out.size(), rows_.size(), "block matvec output");
  for (std::size_t l = 0; l < rows_.size(); ++l) out[l] = parent_->row(rows_[l]).dot(x);
}

Vector RowBlock::matvec_t(std::span<const double> y) const {
  Vector out(cols());
  matvec_t(y, out);
  return out;
}

void RowBlock::matvec_t(std::span<const double> y, std::span<double> out) const {
  check_length(y.size(), rows_.size(), "block matvec_t input");
  check_length(out.size(), cols(), "block matvec_t output");
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t l = 0; l < rows_.size(); ++l) parent_->row(rows_[l]).axpy(y[l], out);
}

Eigen::MatrixXd RowBlock::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_.size()),
                                            static_cast<Eigen::Index>(cols()));
  for (std::size_t l = 0; l < rows_.size(); ++l) {
    const auto r = row(l);
    for (std::size_t k = 0; k < r.cols.size(); ++k)
      d(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r.cols[k])) = r.values[k];
  }
  return d;
}

// ---------------------------------------------------------------------------

double dot(std::span<const double> a, std::span<const double> b) {
  check_length(b.size(), a.size(), "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2_sq(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(norm2_sq(a)); }

}  // namespace rbskm

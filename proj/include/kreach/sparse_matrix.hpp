#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace kreach {

using Index = std::int64_t;

inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Real matrix in compressed-row layout. Immutable after construction, so a
/// single instance can be shared by concurrent simulations.
///
/// Invariants (checked by the constructor): row_offsets has rows+1
/// nondecreasing entries ending at nnz, column indices are strictly
/// increasing within a row and below cols, and no explicit zeros are stored.
class SparseMatrix {
 public:
  SparseMatrix() : row_offsets_(1, 0) {}

  /// Explicit zeros in `values` are pruned; everything else must already be
  /// in canonical compressed-row form.
  SparseMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
               std::vector<Index> col_indices, std::vector<double> values);

  /// Duplicates are summed; entries that sum to zero are dropped.
  static SparseMatrix from_triplets(Index rows, Index cols,
                                    std::vector<Triplet> triplets);
  static SparseMatrix from_dense(const Eigen::MatrixXd& dense);
  static SparseMatrix identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }
  bool square() const { return rows_ == cols_; }

  std::span<const Index> row_offsets() const { return row_offsets_; }
  std::span<const Index> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }

  double coeff(Index row, Index col) const;
  Eigen::MatrixXd to_dense() const;
  SparseMatrix scaled(double factor) const;

  /// Maximum absolute column sum.
  double norm1() const;
  /// Maximum absolute row sum.
  double norm_inf() const;

  std::vector<Triplet> triplets() const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_offsets_;
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

/// y = A x. Rows are accumulated in ascending column order.
std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x);

SparseMatrix transpose(const SparseMatrix& a);

/// max |A - A^T| <= tol entrywise. Throws InputError for a non-square A.
bool is_symmetric(const SparseMatrix& a, double tol);

/// Lifts x' = Ax + b to the (n+1)-dimensional linear system whose last
/// variable is constant: A in the top-left block, b as the extra column and
/// an all-zero extra row.
SparseMatrix affine_to_linear(const SparseMatrix& a, std::span<const double> b);

/// Block-diagonal matrix with `copies` copies of `block`.
SparseMatrix block_diagonal(const SparseMatrix& block, Index copies);

/// sparse * dense, returned dense.
Eigen::MatrixXd multiply(const SparseMatrix& a, const Eigen::MatrixXd& dense);

}  // namespace kreach

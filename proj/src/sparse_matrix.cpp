#include "kreach/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kreach/errors.hpp"
#include "kreach/kernels.hpp"

namespace kreach {

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Index> row_offsets,
                           std::vector<Index> col_indices, std::vector<double> values)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw InputError("SparseMatrix: negative dimension");
  if (static_cast<Index>(row_offsets.size()) != rows + 1)
    throw InputError("SparseMatrix: row_offsets must have rows+1 entries");
  if (col_indices.size() != values.size())
    throw InputError("SparseMatrix: col_indices and values differ in length");
  if (row_offsets.front() != 0 || row_offsets.back() != static_cast<Index>(values.size()))
    throw InputError("SparseMatrix: row_offsets must start at 0 and end at nnz");

  row_offsets_.reserve(row_offsets.size());
  row_offsets_.push_back(0);
  col_indices_.reserve(col_indices.size());
  values_.reserve(values.size());
  for (Index i = 0; i < rows; ++i) {
    if (row_offsets[i + 1] < row_offsets[i])
      throw InputError("SparseMatrix: row_offsets must be nondecreasing");
    Index previous = -1;
    for (Index p = row_offsets[i]; p < row_offsets[i + 1]; ++p) {
      const Index c = col_indices[p];
      if (c <= previous || c >= cols)
        throw InputError("SparseMatrix: column indices must be increasing and in range (row " +
                         std::to_string(i) + ")");
      previous = c;
      if (values[p] == 0.0) continue;
      col_indices_.push_back(c);
      values_.push_back(values[p]);
    }
    row_offsets_.push_back(static_cast<Index>(values_.size()));
  }
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw InputError("SparseMatrix: triplet (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ") outside the declared dimensions");
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Index> offsets(rows + 1, 0);
  std::vector<Index> cols_out;
  std::vector<double> vals_out;
  cols_out.reserve(triplets.size());
  vals_out.reserve(triplets.size());
  std::size_t p = 0;
  for (Index r = 0; r < rows; ++r) {
    while (p < triplets.size() && triplets[p].row == r) {
      const Index c = triplets[p].col;
      double sum = 0.0;
      while (p < triplets.size() && triplets[p].row == r && triplets[p].col == c) {
        sum += triplets[p].value;
        ++p;
      }
      if (sum != 0.0) {
        cols_out.push_back(c);
        vals_out.push_back(sum);
      }
    }
    offsets[r + 1] = static_cast<Index>(vals_out.size());
  }
  return SparseMatrix(rows, cols, std::move(offsets), std::move(cols_out), std::move(vals_out));
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense) {
  std::vector<Triplet> t;
  for (Index i = 0; i < dense.rows(); ++i)
    for (Index j = 0; j < dense.cols(); ++j)
      if (dense(i, j) != 0.0) t.push_back({i, j, dense(i, j)});
  return from_triplets(dense.rows(), dense.cols(), std::move(t));
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Index> offsets(n + 1);
  std::vector<Index> cols(n);
  for (Index i = 0; i <= n; ++i) offsets[i] = i;
  for (Index i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0));
}

double SparseMatrix::coeff(Index row, Index col) const {
  const auto begin = col_indices_.begin() + row_offsets_[row];
  const auto end = col_indices_.begin() + row_offsets_[row + 1];
  const auto it = std::lower_bound(begin, end, col);
  if (it == end || *it != col) return 0.0;
  return values_[it - col_indices_.begin()];
}

Eigen::MatrixXd SparseMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows_, cols_);
  for (Index i = 0; i < rows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) d(i, col_indices_[p]) = values_[p];
  return d;
}

SparseMatrix SparseMatrix::scaled(double factor) const {
  SparseMatrix out = *this;
  if (factor == 0.0) return SparseMatrix(rows_, cols_, std::vector<Index>(rows_ + 1, 0), {}, {});
  for (double& v : out.values_) v *= factor;
  return out;
}

double SparseMatrix::norm1() const {
  std::vector<double> colsum(cols_, 0.0);
  for (std::size_t p = 0; p < values_.size(); ++p) colsum[col_indices_[p]] += std::abs(values_[p]);
  double m = 0.0;
  for (double s : colsum) m = std::max(m, s);
  return m;
}

double SparseMatrix::norm_inf() const {
  double m = 0.0;
  for (Index i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) s += std::abs(values_[p]);
    m = std::max(m, s);
  }
  return m;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (Index i = 0; i < rows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      t.push_back({i, col_indices_[p], values_[p]});
  return t;
}

std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
  if (static_cast<Index>(x.size()) != a.cols())
    throw InputError("spmv: vector length " + std::to_string(x.size()) + " does not match " +
                     std::to_string(a.cols()) + " columns");
  std::vector<double> y(a.rows());
  kernels::spmv(a, x, y);
  return y;
}

SparseMatrix transpose(const SparseMatrix& a) {
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  std::vector<Index> t_offsets(a.cols() + 1, 0);
  for (Index c : cols) ++t_offsets[c + 1];
  for (Index j = 0; j < a.cols(); ++j) t_offsets[j + 1] += t_offsets[j];
  std::vector<Index> cursor(t_offsets.begin(), t_offsets.end() - 1);
  std::vector<Index> t_cols(a.nnz());
  std::vector<double> t_vals(a.nnz());
  // Rows are visited in ascending order, so each transposed row comes out sorted.
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index p = offsets[i]; p < offsets[i + 1]; ++p) {
      const Index dst = cursor[cols[p]]++;
      t_cols[dst] = i;
      t_vals[dst] = vals[p];
    }
  }
  return SparseMatrix(a.cols(), a.rows(), std::move(t_offsets), std::move(t_cols),
                      std::move(t_vals));
}

bool is_symmetric(const SparseMatrix& a, double tol) {
  if (!a.square()) throw InputError("is_symmetric: matrix is not square");
  const SparseMatrix t = transpose(a);
  const auto ao = a.row_offsets();
  const auto ac = a.col_indices();
  const auto av = a.values();
  const auto to = t.row_offsets();
  const auto tc = t.col_indices();
  const auto tv = t.values();
  for (Index i = 0; i < a.rows(); ++i) {
    // Merge the two sorted rows.
    Index p = ao[i], q = to[i];
    while (p < ao[i + 1] || q < to[i + 1]) {
      double diff;
      if (q >= to[i + 1] || (p < ao[i + 1] && ac[p] < tc[q])) {
        diff = av[p++];
      } else if (p >= ao[i + 1] || tc[q] < ac[p]) {
        diff = tv[q++];
      } else {
        diff = av[p++] - tv[q++];
      }
      if (std::abs(diff) > tol) return false;
    }
  }
  return true;
}

SparseMatrix affine_to_linear(const SparseMatrix& a, std::span<const double> b) {
  if (!a.square()) throw InputError("affine_to_linear: A must be square");
  if (static_cast<Index>(b.size()) != a.rows())
    throw InputError("affine_to_linear: b has length " + std::to_string(b.size()) +
                     ", expected " + std::to_string(a.rows()));
  const Index n = a.rows();
  std::vector<Index> offsets;
  std::vector<Index> cols;
  std::vector<double> vals;
  offsets.reserve(n + 2);
  offsets.push_back(0);
  const auto ao = a.row_offsets();
  const auto ac = a.col_indices();
  const auto av = a.values();
  for (Index i = 0; i < n; ++i) {
    for (Index p = ao[i]; p < ao[i + 1]; ++p) {
      cols.push_back(ac[p]);
      vals.push_back(av[p]);
    }
    if (b[i] != 0.0) {
      cols.push_back(n);
      vals.push_back(b[i]);
    }
    offsets.push_back(static_cast<Index>(vals.size()));
  }
  offsets.push_back(static_cast<Index>(vals.size()));
  return SparseMatrix(n + 1, n + 1, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix block_diagonal(const SparseMatrix& block, Index copies) {
  if (copies < 1) throw InputError("block_diagonal: need at least one copy");
  const Index r = block.rows();
  const Index c = block.cols();
  const auto bo = block.row_offsets();
  const auto bc = block.col_indices();
  const auto bv = block.values();
  std::vector<Index> offsets;
  offsets.reserve(r * copies + 1);
  offsets.push_back(0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(block.nnz() * copies);
  vals.reserve(block.nnz() * copies);
  for (Index k = 0; k < copies; ++k) {
    for (Index i = 0; i < r; ++i) {
      for (Index p = bo[i]; p < bo[i + 1]; ++p) {
        cols.push_back(bc[p] + k * c);
        vals.push_back(bv[p]);
      }
      offsets.push_back(static_cast<Index>(vals.size()));
    }
  }
  return SparseMatrix(r * copies, c * copies, std::move(offsets), std::move(cols),
                      std::move(vals));
}

Eigen::MatrixXd multiply(const SparseMatrix& a, const Eigen::MatrixXd& dense) {
  if (a.cols() != dense.rows()) throw InputError("multiply: dimension mismatch");
  Eigen::MatrixXd out(a.rows(), dense.cols());
  for (Index j = 0; j < dense.cols(); ++j) {
    kernels::spmv(a, std::span<const double>(dense.col(j).data(), dense.rows()),
                  std::span<double>(out.col(j).data(), out.rows()));
  }
  return out;
}

}  // namespace kreach

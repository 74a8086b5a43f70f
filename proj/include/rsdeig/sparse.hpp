#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rsdeig/dense.hpp"
#include "rsdeig/vector_ops.hpp"

namespace rsdeig {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Rectangular CSR matrix; column indices strictly increasing in each row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  // Duplicates are summed.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return offsets_; }
  std::span<const std::size_t> col_indices() const noexcept { return cols_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  double at(std::size_t i, std::size_t j) const;
  Vec matvec(std::span<const double> x) const;
  Vec transpose_matvec(std::span<const double> x) const;
  CsrMatrix transpose() const;
  DenseMatrix to_dense() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_idx_;
  std::vector<double> values_;
};

// Structurally and numerically symmetric square CSR matrix.
class SparseSym {
 public:
  SparseSym() = default;
  // Entries for both triangles must be supplied. Mismatches above 1e-12 relative
  // throw InvalidArgument; smaller ones are averaged away.
  static SparseSym from_triplets(std::size_t n, std::vector<Triplet> entries);
  static SparseSym from_csr(CsrMatrix m);
  static SparseSym from_dense(const DenseSym& d, double drop_tol = 0.0);
  static SparseSym identity(std::size_t n);

  std::size_t n() const noexcept { return csr_.rows(); }
  const CsrMatrix& csr() const noexcept { return csr_; }
  double at(std::size_t i, std::size_t j) const { return csr_.at(i, j); }

  Vec matvec(std::span<const double> x) const { return csr_.matvec(x); }
  Operator as_operator() const;
  DenseSym to_dense() const;

  // Rows and columns restricted to `indices` (ascending), renumbered 0..k-1.
  SparseSym principal_submatrix(std::span<const std::size_t> indices) const;

  // P^T * this * P for a tall prolongation P.
  SparseSym galerkin(const CsrMatrix& prolongation) const;

 private:
  CsrMatrix csr_;
};

}  // namespace rsdeig

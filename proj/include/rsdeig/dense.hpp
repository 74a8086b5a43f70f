#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rsdeig/vector_ops.hpp"

namespace rsdeig {

// General row-major dense matrix. Used for oracles and small explicit work.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  Vec matvec(std::span<const double> x) const;
  Vec column(std::size_t j) const;
  DenseMatrix transpose() const;
  DenseMatrix operator*(const DenseMatrix& other) const;
  double frobenius_norm() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Symmetric dense matrix; entries are stored symmetrized so (i,j) == (j,i) bitwise.
class DenseSym {
 public:
  DenseSym() = default;
  explicit DenseSym(std::size_t n);

  // Symmetrizes by averaging the two triangles.
  static DenseSym from_matrix(const DenseMatrix& m);
  static DenseSym from_rows(const std::vector<std::vector<double>>& rows);
  static DenseSym identity(std::size_t n);
  static DenseSym diagonal(std::span<const double> d);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  // Writes both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v);

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }
  Vec matvec(std::span<const double> x) const;
  Operator as_operator() const;
  DenseMatrix to_matrix() const;
  double frobenius_norm() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

}  // namespace rsdeig

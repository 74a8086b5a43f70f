#include "rsdeig/dense.hpp"

#include <cmath>
#include <memory>

#include "rsdeig/error.hpp"

namespace rsdeig {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec DenseMatrix::matvec(std::span<const double> x) const {
  if (x.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "matvec");
  Vec y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) y[i] = dot(row(i), x);
  return y;
}

Vec DenseMatrix::column(std::size_t j) const {
  Vec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
  if (cols_ != other.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product");
  DenseMatrix c(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) c(i, j) += a * other(k, j);
    }
  return c;
}

double DenseMatrix::frobenius_norm() const { return norm2(data_); }

DenseSym::DenseSym(std::size_t n) : n_(n), data_(n * n, 0.0) {}

DenseSym DenseSym::from_matrix(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "DenseSym needs a square matrix");
  DenseSym s(m.rows());
  for (std::size_t i = 0; i < s.n_; ++i)
    for (std::size_t j = i; j < s.n_; ++j) s.set(i, j, 0.5 * (m(i, j) + m(j, i)));
  return s;
}

DenseSym DenseSym::from_rows(const std::vector<std::vector<double>>& rows) {
  DenseMatrix m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return from_matrix(m);
}

DenseSym DenseSym::identity(std::size_t n) {
  DenseSym s(n);
  for (std::size_t i = 0; i < n; ++i) s.set(i, i, 1.0);
  return s;
}

DenseSym DenseSym::diagonal(std::span<const double> d) {
  DenseSym s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
  return s;
}

void DenseSym::set(std::size_t i, std::size_t j, double v) {
  data_[i * n_ + j] = v;
  data_[j * n_ + i] = v;
}

Vec DenseSym::matvec(std::span<const double> x) const {
  if (x.size() != n_) throw Error(ErrorCode::DimensionMismatch, "matvec");
  Vec y(n_);
  for (std::size_t i = 0; i < n_; ++i) y[i] = dot(row(i), x);
  return y;
}

Operator DenseSym::as_operator() const {
  auto self = std::make_shared<const DenseSym>(*this);
  return [self](std::span<const double> x) { return self->matvec(x); };
}

DenseMatrix DenseSym::to_matrix() const {
  DenseMatrix m(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

double DenseSym::frobenius_norm() const { return norm2(data_); }

}  // namespace rsdeig

#include "rsdeig/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "rsdeig/error.hpp"

namespace rsdeig {

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  for (const auto& t : entries)
    if (t.row >= rows || t.col >= cols)
      throw Error(ErrorCode::DimensionMismatch, "triplet index out of range");
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.offsets_.assign(rows + 1, 0);
  for (std::size_t k = 0; k < entries.size();) {
    std::size_t e = k;
    double v = 0.0;
    while (e < entries.size() && entries[e].row == entries[k].row && entries[e].col == entries[k].col)
      v += entries[e++].value;
    m.cols_idx_.push_back(entries[k].col);
    m.values_.push_back(v);
    ++m.offsets_[entries[k].row + 1];
    k = e;
  }
  for (std::size_t i = 0; i < rows; ++i) m.offsets_[i + 1] += m.offsets_[i];
  return m;
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto begin = cols_idx_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  const auto end = cols_idx_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_idx_.begin())];
}

Vec CsrMatrix::matvec(std::span<const double> x) const {
  if (x.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "sparse matvec");
  Vec y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) s += values_[k] * x[cols_idx_[k]];
    y[i] = s;
  }
  return y;
}

Vec CsrMatrix::transpose_matvec(std::span<const double> x) const {
  if (x.size() != rows_) throw Error(ErrorCode::DimensionMismatch, "sparse transpose matvec");
  Vec y(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) y[cols_idx_[k]] += values_[k] * x[i];
  return y;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) t.push_back({cols_idx_[k], i, values_[k]});
  return from_triplets(cols_, rows_, std::move(t));
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) d(i, cols_idx_[k]) = values_[k];
  return d;
}

SparseSym SparseSym::from_csr(CsrMatrix m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "SparseSym needs a square matrix");
  const auto off = m.row_offsets();
  const auto col = m.col_indices();
  const auto val = m.values();
  std::vector<Triplet> sym;
  sym.reserve(m.nnz());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      const double mirror = m.at(col[k], i);
      if (std::abs(mirror - val[k]) > 1e-12 * std::max(std::abs(val[k]), std::abs(mirror)))
        throw Error(ErrorCode::InvalidArgument, "matrix is not symmetric");
      sym.push_back({i, col[k], 0.5 * (val[k] + mirror)});
    }
  SparseSym s;
  s.csr_ = CsrMatrix::from_triplets(m.rows(), m.cols(), std::move(sym));
  return s;
}

SparseSym SparseSym::from_triplets(std::size_t n, std::vector<Triplet> entries) {
  return from_csr(CsrMatrix::from_triplets(n, n, std::move(entries)));
}

SparseSym SparseSym::from_dense(const DenseSym& d, double drop_tol) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.n(); ++i)
    for (std::size_t j = 0; j < d.n(); ++j)
      if (i == j || std::abs(d(i, j)) > drop_tol) t.push_back({i, j, d(i, j)});
  return from_triplets(d.n(), std::move(t));
}

SparseSym SparseSym::identity(std::size_t n) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, std::move(t));
}

Operator SparseSym::as_operator() const {
  auto self = std::make_shared<const SparseSym>(*this);
  return [self](std::span<const double> x) { return self->matvec(x); };
}

DenseSym SparseSym::to_dense() const { return DenseSym::from_matrix(csr_.to_dense()); }

SparseSym SparseSym::principal_submatrix(std::span<const std::size_t> indices) const {
  std::vector<std::size_t> local(n(), static_cast<std::size_t>(-1));
  for (std::size_t k = 0; k < indices.size(); ++k) local[indices[k]] = k;
  const auto off = csr_.row_offsets();
  const auto col = csr_.col_indices();
  const auto val = csr_.values();
  std::vector<Triplet> t;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const std::size_t i = indices[k];
    for (std::size_t p = off[i]; p < off[i + 1]; ++p)
      if (local[col[p]] != static_cast<std::size_t>(-1)) t.push_back({k, local[col[p]], val[p]});
  }
  return from_triplets(indices.size(), std::move(t));
}

SparseSym SparseSym::galerkin(const CsrMatrix& p) const {
  if (p.rows() != n()) throw Error(ErrorCode::DimensionMismatch, "galerkin prolongation");
  const auto off = csr_.row_offsets();
  const auto col = csr_.col_indices();
  const auto val = csr_.values();
  const auto poff = p.row_offsets();
  const auto pcol = p.col_indices();
  const auto pval = p.values();
  std::map<std::pair<std::size_t, std::size_t>, double> acc;
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t a = off[i]; a < off[i + 1]; ++a) {
      const std::size_t k = col[a];
      for (std::size_t q = poff[i]; q < poff[i + 1]; ++q)
        for (std::size_t r = poff[k]; r < poff[k + 1]; ++r)
          acc[{pcol[q], pcol[r]}] += pval[q] * val[a] * pval[r];
    }
  std::vector<Triplet> t;
  t.reserve(acc.size());
  for (const auto& [ij, v] : acc) t.push_back({ij.first, ij.second, v});
  return from_triplets(p.cols(), std::move(t));
}

}  // namespace rsdeig

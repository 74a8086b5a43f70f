#include "rsdeig/cholesky.hpp"

#include <algorithm>
#include <cmath>

#include "rsdeig/error.hpp"

namespace rsdeig {

namespace {

// Row-oriented Cholesky on packed lower storage with all arithmetic in T.
template <typename T>
std::vector<T> factor_packed(const DenseSym& m, ErrorCode failure) {
  const std::size_t n = m.n();
  std::vector<T> l(n * (n + 1) / 2);
  auto at = [&](std::size_t i, std::size_t j) -> T& { return l[i * (i + 1) / 2 + j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      T s = static_cast<T>(m(i, j));
      for (std::size_t k = 0; k < j; ++k) s -= at(i, k) * at(j, k);
      if (i == j) {
        if (!(s > T(0))) throw NotSpdError(failure, i, static_cast<double>(s));
        at(i, i) = std::sqrt(s);
      } else {
        at(i, j) = s / at(j, j);
      }
    }
  }
  return l;
}

template <typename T>
Vec solve_packed(std::size_t n, const std::vector<double>& l, std::span<const double> rhs) {
  auto at = [&](std::size_t i, std::size_t j) { return static_cast<T>(l[i * (i + 1) / 2 + j]); };
  std::vector<T> y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    T s = y[i];
    for (std::size_t k = 0; k < i; ++k) s -= at(i, k) * y[k];
    y[i] = s / at(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    T s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= at(k, i) * y[k];
    y[i] = s / at(i, i);
  }
  return Vec(y.begin(), y.end());
}

template <typename T>
Vec llt_packed(std::size_t n, const std::vector<double>& l, std::span<const double> v) {
  auto at = [&](std::size_t i, std::size_t j) { return static_cast<T>(l[i * (i + 1) / 2 + j]); };
  std::vector<T> x(v.begin(), v.end());
  std::vector<T> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    T s = 0;
    for (std::size_t k = i; k < n; ++k) s += at(k, i) * x[k];
    w[i] = s;
  }
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    T s = 0;
    for (std::size_t k = 0; k <= i; ++k) s += at(i, k) * w[k];
    out[i] = static_cast<double>(s);
  }
  return out;
}

}  // namespace

CholFactor cholesky(const DenseSym& m, Precision precision) {
  if (m.n() == 0) throw Error(ErrorCode::InvalidArgument, "empty matrix");
  CholFactor f;
  f.n_ = m.n();
  f.precision_ = precision;
  if (precision == Precision::binary64) {
    f.values_ = factor_packed<double>(m, ErrorCode::NotSpd);
  } else {
    const auto low = factor_packed<float>(m, ErrorCode::NotSpdInLowPrecision);
    f.values_.assign(low.begin(), low.end());
  }
  return f;
}

Vec chol_solve(const CholFactor& f, std::span<const double> rhs) {
  if (rhs.size() != f.n()) throw Error(ErrorCode::DimensionMismatch, "chol_solve");
  if (f.precision() == Precision::binary32) return solve_packed<float>(f.n(), f.values_, rhs);
  return solve_packed<double>(f.n(), f.values_, rhs);
}

Vec chol_solve_binary64(const CholFactor& f, std::span<const double> rhs) {
  if (rhs.size() != f.n()) throw Error(ErrorCode::DimensionMismatch, "chol_solve");
  return solve_packed<double>(f.n(), f.values_, rhs);
}

Vec CholFactor::multiply_llt(std::span<const double> v) const {
  if (v.size() != n_) throw Error(ErrorCode::DimensionMismatch, "multiply_llt");
  if (precision_ == Precision::binary32) return llt_packed<float>(n_, values_, v);
  return llt_packed<double>(n_, values_, v);
}

Vec CholFactor::multiply_llt_binary64(std::span<const double> v) const {
  if (v.size() != n_) throw Error(ErrorCode::DimensionMismatch, "multiply_llt");
  return llt_packed<double>(n_, values_, v);
}

DenseMatrix CholFactor::lower() const {
  DenseMatrix out(n_, n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j <= i; ++j) out(i, j) = l(i, j);
  return out;
}

EnvelopeCholesky::EnvelopeCholesky(const SparseSym& a) {
  const std::size_t n = a.n();
  const auto off = a.csr().row_offsets();
  const auto col = a.csr().col_indices();
  const auto val = a.csr().values();
  first_.resize(n);
  start_.resize(n + 1);
  start_[0] = 0;
  for (std::size_t i = 0; i < n; ++i) {
    first_[i] = i;
    if (off[i] < off[i + 1]) first_[i] = std::min(i, col[off[i]]);
    start_[i + 1] = start_[i] + (i - first_[i] + 1);
  }
  values_.assign(start_[n], 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = off[i]; k < off[i + 1]; ++k)
      if (col[k] <= i) values_[start_[i] + (col[k] - first_[i])] = val[k];

  for (std::size_t i = 0; i < n; ++i) {
    double* row_i = values_.data() + start_[i];
    const std::size_t fi = first_[i];
    for (std::size_t j = fi; j < i; ++j) {
      const double* row_j = values_.data() + start_[j];
      const std::size_t fj = first_[j];
      const std::size_t k0 = std::max(fi, fj);
      double s = row_i[j - fi];
      for (std::size_t k = k0; k < j; ++k) s -= row_i[k - fi] * row_j[k - fj];
      row_i[j - fi] = s / row_j[j - fj];
    }
    double d = row_i[i - fi];
    for (std::size_t k = fi; k < i; ++k) d -= row_i[k - fi] * row_i[k - fi];
    if (!(d > 0.0)) throw NotSpdError(ErrorCode::NotSpd, i, d);
    row_i[i - fi] = std::sqrt(d);
  }
}

Vec EnvelopeCholesky::solve_lower(std::span<const double> v) const {
  if (v.size() != n()) throw Error(ErrorCode::DimensionMismatch, "envelope solve");
  Vec y(v.begin(), v.end());
  for (std::size_t i = 0; i < n(); ++i) {
    double s = y[i];
    for (std::size_t k = first_[i]; k < i; ++k) s -= entry(i, k) * y[k];
    y[i] = s / entry(i, i);
  }
  return y;
}

Vec EnvelopeCholesky::solve_upper(std::span<const double> v) const {
  if (v.size() != n()) throw Error(ErrorCode::DimensionMismatch, "envelope solve");
  Vec y(v.begin(), v.end());
  for (std::size_t i = n(); i-- > 0;) {
    y[i] /= entry(i, i);
    const double yi = y[i];
    for (std::size_t k = first_[i]; k < i; ++k) y[k] -= entry(i, k) * yi;
  }
  return y;
}

Vec EnvelopeCholesky::solve(std::span<const double> rhs) const { return solve_upper(solve_lower(rhs)); }

Vec EnvelopeCholesky::multiply_lower(std::span<const double> v) const {
  if (v.size() != n()) throw Error(ErrorCode::DimensionMismatch, "envelope multiply");
  Vec y(n(), 0.0);
  for (std::size_t i = 0; i < n(); ++i) {
    double s = 0.0;
    for (std::size_t k = first_[i]; k <= i; ++k) s += entry(i, k) * v[k];
    y[i] = s;
  }
  return y;
}

Vec EnvelopeCholesky::multiply_upper(std::span<const double> v) const {
  if (v.size() != n()) throw Error(ErrorCode::DimensionMismatch, "envelope multiply");
  Vec y(n(), 0.0);
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t k = first_[i]; k <= i; ++k) y[k] += entry(i, k) * v[i];
  return y;
}

}  // namespace rsdeig

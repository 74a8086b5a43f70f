#include "rsdeig/dense_eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsdeig/error.hpp"

namespace rsdeig {

namespace {

SymEigen sorted(std::vector<double> values, const DenseMatrix& vectors) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  SymEigen out;
  out.values.resize(n);
  out.vectors = DenseMatrix(vectors.rows(), n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = values[order[k]];
    for (std::size_t i = 0; i < vectors.rows(); ++i) out.vectors(i, k) = vectors(i, order[k]);
  }
  return out;
}

}  // namespace

SymEigen dense_sym_eig(const DenseSym& m, int max_sweeps) {
  const std::size_t n = m.n();
  DenseMatrix a = m.to_matrix();
  DenseMatrix v = DenseMatrix::identity(n);
  const double scale = m.frobenius_norm();
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
    return std::sqrt(2.0 * s);
  };

  int sweep = 0;
  bool rotated = true;
  while (rotated) {
    const double off = off_norm();
    if (off == 0.0 || off <= 0x1p-60 * scale) break;
    if (sweep++ == max_sweeps) throw Error(ErrorCode::NoConvergence, "Jacobi sweep limit reached");
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        // Relative threshold: negligible against the local diagonal.
        if (std::abs(apq) <= 0x1p-53 * std::sqrt(std::abs(a(p, p) * a(q, q)))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = a(p, k) = c * akp - s * akq;
          a(k, q) = a(q, k) = s * akp + c * akq;
        }
        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
  return sorted(std::move(values), v);
}

DenseSym spectral_function(const SymEigen& eig, double (*fn)(double)) {
  const std::size_t n = eig.values.size();
  std::vector<double> f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = fn(eig.values[k]);
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += eig.vectors(i, k) * f[k] * eig.vectors(j, k);
      out(i, j) = s;
    }
  return DenseSym::from_matrix(out);
}

DenseSym matrix_sqrt(const DenseSym& m) {
  return spectral_function(dense_sym_eig(m), [](double x) { return std::sqrt(x); });
}

DenseSym matrix_inv_sqrt(const DenseSym& m) {
  return spectral_function(dense_sym_eig(m), [](double x) { return 1.0 / std::sqrt(x); });
}

SymEigen tridiagonal_eig(std::span<const double> diag, std::span<const double> offdiag) {
  std::vector<std::size_t> rows(diag.size());
  std::iota(rows.begin(), rows.end(), 0);
  return tridiagonal_eig_rows(diag, offdiag, rows);
}

SymEigen tridiagonal_eig_rows(std::span<const double> diag, std::span<const double> offdiag,
                              std::span<const std::size_t> rows) {
  const int n = static_cast<int>(diag.size());
  const int nr = static_cast<int>(rows.size());
  std::vector<double> d(diag.begin(), diag.end());
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i + 1 < n; ++i) e[static_cast<std::size_t>(i)] = offdiag[static_cast<std::size_t>(i)];
  DenseMatrix z(rows.size(), static_cast<std::size_t>(n));
  for (int r = 0; r < nr; ++r) z(r, rows[r]) = 1.0;
  constexpr double eps = 0x1p-52;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) throw Error(ErrorCode::NoConvergence, "tridiagonal QL iteration limit");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          const double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < nr; ++k) {
            const double zf = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * zf;
            z(k, i) = c * z(k, i) - s * zf;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  return sorted(std::move(d), z);
}

}  // namespace rsdeig

#pragma once

// Dense reference computations for tests. Kept deliberately naive: explicit
// matrices, textbook loops, no reuse of the solver paths being checked.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rsdeig/dense.hpp"
#include "rsdeig/dense_eig.hpp"
#include "rsdeig/preconditioner.hpp"
#include "rsdeig/rng.hpp"
#include "rsdeig/vector_ops.hpp"

namespace oracle {

using rsdeig::DenseMatrix;
using rsdeig::DenseSym;
using rsdeig::Vec;

template <class L, class R>
DenseMatrix mul(const L& a, const R& b, std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      m(i, j) = s;
    }
  return m;
}

// Product of two commuting symmetric matrices.
inline DenseSym mul_sym(const DenseSym& a, const DenseSym& b) { return DenseSym::from_matrix(mul(a, b, a.n())); }

// S A S for symmetric S.
inline DenseSym congruence(const DenseSym& s, const DenseSym& a) {
  const std::size_t n = a.n();
  return DenseSym::from_matrix(mul(mul(s, a, n), s, n));
}

inline DenseSym inverse(const DenseSym& a) {
  const rsdeig::SymEigen e = rsdeig::dense_sym_eig(a);
  return rsdeig::spectral_function(e, [](double x) { return 1.0 / x; });
}

// Explicit matrix of a linear map given by its action.
inline DenseSym materialize(const rsdeig::Operator& op, std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vec c = op(rsdeig::unit_vector(n, j));
    for (std::size_t i = 0; i < n; ++i) m(i, j) = c[i];
  }
  return DenseSym::from_matrix(m);
}

inline DenseSym random_spd(std::size_t n, std::uint64_t seed, double shift = 0.5) {
  rsdeig::Rng rng(seed);
  DenseMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal();
  DenseSym a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g(i, k) * g(j, k);
      a.set(i, j, s / static_cast<double>(n) + (i == j ? shift : 0.0));
    }
  return a;
}

inline Vec random_vec(std::size_t n, std::uint64_t seed) {
  rsdeig::Rng rng(seed);
  return rsdeig::gaussian_vector(rng, n);
}

inline double cond(const DenseSym& a) {
  const auto e = rsdeig::dense_sym_eig(a);
  return e.values.back() / e.values.front();
}

// x-space picture of a u-space point: x = B^{1/2} u / ||B^{1/2} u||.
struct XSpace {
  DenseSym b_half, b_mhalf, c;  // c = B^{-1/2} A B^{-1/2}
  DenseSym a, b;

  XSpace(const DenseSym& a_, const DenseSym& b_)
      : b_half(rsdeig::matrix_sqrt(b_)), b_mhalf(rsdeig::matrix_inv_sqrt(b_)), a(a_), b(b_) {
    c = congruence(b_mhalf, a);
  }

  Vec to_x(const Vec& u) const {
    Vec x = b_half.matvec(u);
    rsdeig::scale(1.0 / rsdeig::norm2(x), x);
    return x;
  }

  // f(x) = -x^T B^{-1} x / x^T C x.
  double f(const Vec& x) const {
    const Vec binv_x = b_mhalf.matvec(b_mhalf.matvec(x));
    return -rsdeig::dot(x, binv_x) / rsdeig::dot(x, c.matvec(x));
  }

  // Riemannian gradient: Euclidean gradient projected on the tangent space.
  Vec grad(const Vec& x) const {
    const Vec binv_x = b_mhalf.matvec(b_mhalf.matvec(x));
    const Vec cx = c.matvec(x);
    const double q = rsdeig::dot(x, cx);
    const double p = rsdeig::dot(x, binv_x);
    Vec g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = -2.0 * binv_x[i] / q + 2.0 * p * cx[i] / (q * q);
    const double xg = rsdeig::dot(x, g);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] -= xg * x[i];
    return g;
  }

  // Great-circle step x cos|t| + t sin|t| / |t|.
  static Vec exp_map(const Vec& x, const Vec& t) {
    const double nt = rsdeig::norm2(t);
    Vec y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::cos(nt) * x[i] + (nt > 0 ? std::sin(nt) / nt : 1.0) * t[i];
    return y;
  }

  Vec to_u(const Vec& x) const { return b_mhalf.matvec(x); }
};

inline double angle(const Vec& x, const Vec& y) {
  const double c = std::abs(rsdeig::dot(x, y)) / (rsdeig::norm2(x) * rsdeig::norm2(y));
  return std::acos(std::min(1.0, c));
}

// Unpreconditioned textbook CG; returns the iteration count at tolerance tol.
inline std::size_t cg_iterations(const rsdeig::Operator& a, const Vec& b, double tol, std::size_t maxit) {
  const std::size_t n = b.size();
  Vec x(n, 0.0), r = b, p = b;
  double rr = rsdeig::dot(r, r);
  const double stop = tol * rsdeig::norm2(b);
  for (std::size_t k = 1; k <= maxit; ++k) {
    const Vec ap = a(p);
    const double alpha = rr / rsdeig::dot(p, ap);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double rr2 = rsdeig::dot(r, r);
    if (std::sqrt(rr2) <= stop) return k;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + rr2 / rr * p[i];
    rr = rr2;
  }
  return maxit;
}

inline double fd_eigenvalue(double h, int k, int l) {
  const double s1 = std::sin(k * std::numbers::pi * h / 2.0);
  const double s2 = std::sin(l * std::numbers::pi * h / 2.0);
  return 4.0 / (h * h) * (s1 * s1 + s2 * s2);
}

}  // namespace oracle

#include "rsdeig/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "rsdeig/dense_eig.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/rng.hpp"

namespace rsdeig {

PcgResult pcg(const Operator& apply_a, const Operator& apply_m_inv, std::span<const double> rhs, double tol,
              std::size_t maxit) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "pcg tolerance must be positive");
  const std::size_t n = rhs.size();
  const double bnorm = norm2(rhs);
  PcgResult out;
  out.x.assign(n, 0.0);
  if (bnorm == 0.0) return out;

  auto precondition = [&](const Vec& r) { return apply_m_inv ? apply_m_inv(r) : r; };

  Vec r(rhs.begin(), rhs.end());
  Vec best = out.x;
  double best_res = bnorm;
  std::size_t it = 0;
  while (true) {
    Vec z = precondition(r);
    Vec p = z;
    double rz = dot(r, z);
    while (it < maxit) {
      const Vec ap = apply_a(p);
      if (ap.size() != n) throw Error(ErrorCode::DimensionMismatch, "pcg operator output size");
      const double pap = dot(p, ap);
      if (!(pap > 0.0)) throw Error(ErrorCode::BreakdownNonSpd, "p^T A p <= 0 in pcg");
      const double alpha = rz / pap;
      axpy(alpha, p, out.x);
      axpy(-alpha, ap, r);
      ++it;
      const double res = norm2(r);
      if (res < best_res) {
        best_res = res;
        best = out.x;
      }
      if (res <= tol * bnorm) break;
      z = precondition(r);
      const double rz_new = dot(r, z);
      if (!(rz_new > 0.0)) throw Error(ErrorCode::BreakdownNonSpd, "r^T M^{-1} r <= 0 in pcg");
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    // Confirm with the true residual; restart from it if the recurrence drifted.
    const Vec ax = apply_a(out.x);
    r = sub(rhs, ax);
    const double true_res = norm2(r);
    out.relative_residual = true_res / bnorm;
    if (true_res <= tol * bnorm) {
      out.iterations = it;
      return out;
    }
    if (it >= maxit) throw MaxIterationsError("pcg did not reach tolerance", best, it);
  }
}

namespace {

// Lanczos recurrence in the W inner product with full reorthogonalization.
// `step(q, wq)` returns T q.
struct LanczosRun {
  std::vector<double> alpha;
  std::vector<double> beta;  // beta[j] couples q_j and q_{j+1}
  std::vector<Vec> q;
  bool converged = false;
  SymEigen ritz;  // eigenvectors: only the last row unless requested
};

using StepFn = std::function<Vec(const Vec&, const Vec&)>;
// Given the current Ritz decomposition (values ascending, last row of vectors)
// and the trailing beta, decides convergence.
using ConvergedFn = std::function<bool(const SymEigen&, double)>;

LanczosRun run_lanczos(const StepFn& step, const Operator& apply_w, std::size_t dim, const LanczosOptions& opts,
                       const ConvergedFn& converged) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "lanczos needs dim >= 1");
  auto gram = [&](const Vec& v) { return apply_w ? apply_w(v) : v; };
  Rng rng(opts.seed);
  Vec v = gaussian_vector(rng, dim);
  Vec wv = gram(v);
  const double s0 = dot(v, wv);
  if (!(s0 > 0.0)) throw Error(ErrorCode::InnerProductNotPositive, "inner(v, v) <= 0 for the start vector");
  scale(1.0 / std::sqrt(s0), v);
  scale(1.0 / std::sqrt(s0), wv);

  LanczosRun run;
  std::vector<Vec> wq;
  run.q.push_back(std::move(v));
  wq.push_back(std::move(wv));
  const std::size_t cap = std::min(dim, std::max<std::size_t>(opts.maxit, 1));
  double op_scale = 0.0;

  for (std::size_t j = 0;; ++j) {
    Vec z = step(run.q[j], wq[j]);
    const double a = dot(wq[j], z);
    axpy(-a, run.q[j], z);
    if (j > 0) axpy(-run.beta[j - 1], run.q[j - 1], z);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t i = 0; i <= j; ++i) axpy(-dot(wq[i], z), run.q[i], z);
    run.alpha.push_back(a);
    op_scale = std::max(op_scale, std::abs(a));

    Vec wz = gram(z);
    const double bsq = dot(z, wz);
    const std::size_t m = j + 1;
    const bool breakdown = !(bsq > 0.0) || std::sqrt(bsq) <= 1e-13 * op_scale;
    if (bsq < 0.0 && -bsq > 1e-12 * op_scale * op_scale)
      throw Error(ErrorCode::InnerProductNotPositive, "inner(v, v) < 0 during lanczos");
    const double b = breakdown ? 0.0 : std::sqrt(bsq);

    const std::size_t last = m - 1;
    run.ritz = tridiagonal_eig_rows(run.alpha, run.beta, std::span<const std::size_t>(&last, 1));
    if (breakdown || m == dim || converged(run.ritz, b)) {
      run.converged = true;
      return run;
    }
    if (m >= cap) {
      run.converged = false;
      return run;
    }
    run.beta.push_back(b);
    scale(1.0 / b, z);
    scale(1.0 / b, wz);
    run.q.push_back(std::move(z));
    wq.push_back(std::move(wz));
  }
}

ConvergedFn extremal_test(double tol) {
  return [tol](const SymEigen& e, double b) {
    const std::size_t m = e.values.size();
    if (m < 2) return false;
    const double r_min = b * std::abs(e.vectors(0, 0));
    const double r_max = b * std::abs(e.vectors(0, m - 1));
    return r_min <= tol * std::abs(e.values.front()) && r_max <= tol * std::abs(e.values.back());
  };
}

LanczosResult to_result(const LanczosRun& run, const LanczosOptions& opts) {
  if (!run.converged && opts.throw_on_maxit)
    throw MaxIterationsError("lanczos did not converge", {run.ritz.values.front(), run.ritz.values.back()},
                             run.alpha.size());
  LanczosResult out;
  out.nu_min = run.ritz.values.front();
  out.nu_max = run.ritz.values.back();
  out.iterations = run.alpha.size();
  out.converged = run.converged;
  return out;
}

}  // namespace

LanczosResult lanczos_extremal(const Operator& apply_t, const Operator& apply_w, std::size_t dim,
                               const LanczosOptions& opts) {
  const StepFn step = [&](const Vec& q, const Vec&) { return apply_t(q); };
  return to_result(run_lanczos(step, apply_w, dim, opts, extremal_test(opts.tol)), opts);
}

LanczosResult lanczos_pencil(const Operator& apply_a, const Operator& apply_b_inv, std::size_t dim,
                             const LanczosOptions& opts) {
  const StepFn step = [&](const Vec&, const Vec& aq) { return apply_b_inv(aq); };
  return to_result(run_lanczos(step, apply_a, dim, opts, extremal_test(opts.tol)), opts);
}

RitzPairs lanczos_largest(const Operator& apply_t, std::size_t dim, std::size_t count, const LanczosOptions& opts) {
  if (count == 0 || count > dim) throw Error(ErrorCode::InvalidArgument, "lanczos_largest count out of range");
  const StepFn step = [&](const Vec& q, const Vec&) { return apply_t(q); };
  const double tol = opts.tol;
  const ConvergedFn test = [count, tol](const SymEigen& e, double b) {
    const std::size_t m = e.values.size();
    if (m < count + 1) return false;
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t idx = m - 1 - k;
      if (b * std::abs(e.vectors(0, idx)) > tol * std::abs(e.values[idx])) return false;
    }
    return true;
  };
  const LanczosRun run = run_lanczos(step, Operator{}, dim, opts, test);
  if (!run.converged && opts.throw_on_maxit)
    throw MaxIterationsError("lanczos did not converge", {run.ritz.values.back()}, run.alpha.size());

  const SymEigen full = tridiagonal_eig(run.alpha, run.beta);
  const std::size_t m = full.values.size();
  RitzPairs out;
  out.iterations = m;
  out.converged = run.converged;
  for (std::size_t k = 0; k < std::min(count, m); ++k) {
    const std::size_t idx = m - 1 - k;
    out.values.push_back(full.values[idx]);
    Vec y(dim, 0.0);
    for (std::size_t i = 0; i < m; ++i) axpy(full.vectors(i, idx), run.q[i], y);
    scale(1.0 / norm2(y), y);
    out.vectors.push_back(std::move(y));
  }
  return out;
}

}  // namespace rsdeig

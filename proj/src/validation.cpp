#include "rsdeig/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsdeig/cholesky.hpp"
#include "rsdeig/dense_eig.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/geometry.hpp"
#include "rsdeig/rng.hpp"
#include "rsdeig/solvers.hpp"

namespace rsdeig {

namespace {

DenseMatrix gaussian_matrix(std::size_t n, Rng& rng) {
  DenseMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = rng.normal();
  return g;
}

// Orthonormal columns by two passes of modified Gram-Schmidt.
DenseMatrix orthonormalize(DenseMatrix q) {
  const std::size_t n = q.rows();
  for (std::size_t j = 0; j < n; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < j; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += q(i, k) * q(i, j);
        for (std::size_t i = 0; i < n; ++i) q(i, j) -= s * q(i, k);
      }
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) nrm += q(i, j) * q(i, j);
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < n; ++i) q(i, j) /= nrm;
  }
  return q;
}

DenseSym gram_plus_shift(std::size_t n, Rng& rng, double factor, double shift) {
  const DenseMatrix g = gaussian_matrix(n, rng);
  DenseSym b(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += g(i, k) * g(j, k);
      b.set(i, j, factor * s / static_cast<double>(n) + (i == j ? shift : 0.0));
    }
  return b;
}

}  // namespace

const char* to_string(BKind k) {
  switch (k) {
    case BKind::Identity:
      return "identity";
    case BKind::Random:
      return "random";
    case BKind::MpChol:
      return "mp-chol";
    case BKind::Perturbed:
      return "perturbed";
  }
  return "?";
}

DenseSym random_spd(std::size_t n, Rng& rng, double lo, double hi) {
  const DenseMatrix q = orthonormalize(gaussian_matrix(n, rng));
  std::vector<double> lambda(n);
  for (auto& l : lambda) l = lo + (hi - lo) * rng.uniform_open0();
  DenseSym a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += q(i, k) * lambda[k] * q(j, k);
      a.set(i, j, s);
    }
  return a;
}

DenseInstance random_instance(std::size_t n, BKind kind, std::uint64_t seed) {
  DenseInstance inst;
  inst.n = n;
  inst.kind = kind;
  inst.seed = seed;
  Rng rng(derive_seed(seed, 0xa11ce + n));
  inst.a = random_spd(n, rng);
  switch (kind) {
    case BKind::Identity:
      inst.b = DenseSym::identity(n);
      break;
    case BKind::Random:
      inst.b = gram_plus_shift(n, rng, 1.0, 0.1);
      break;
    case BKind::MpChol: {
      const CholFactor f = cholesky(inst.a, Precision::binary32);
      inst.b = DenseSym(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k <= j; ++k) s += f.l(i, k) * f.l(j, k);
          inst.b.set(i, j, s);
        }
      break;
    }
    case BKind::Perturbed: {
      const DenseSym e = gram_plus_shift(n, rng, 0.5, 0.0);
      inst.b = DenseSym(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) inst.b.set(i, j, inst.a(i, j) + e(i, j));
      break;
    }
  }
  return inst;
}

PreparedInstance prepare(const DenseInstance& inst) {
  std::ostringstream label;
  label << "random(n=" << inst.n << ",B=" << to_string(inst.kind) << ",seed=" << inst.seed << ")";
  PreparedInstance out{make_dense_problem(inst.a, label.str()), make_dense(inst.b, to_string(inst.kind)), {}, inst.b};
  const ReferenceSpectrum& ref = out.problem.reference_spectrum();
  const SpectralBounds nu = kappa_nu(out.problem, *out.precond);
  out.ctx = make_rate_context(ref, out.problem.apply_a, *out.precond, nu);
  return out;
}

const char* property_name(std::size_t index) {
  static const char* names[kPropertyCount] = {
      "(i) smoothness",          "(ii) quadratic growth",  "(iii) weak-quasi-convexity",
      "(iv) weak-quasi-strong-convexity", "(v) local bound",  "(vi) angle bound",
      "(vii) contraction"};
  return index < kPropertyCount ? names[index] : "?";
}

double PropertyReport::cos_phi_gap() const { return std::abs(cos_phi_direct - cos_phi_variational); }

bool PropertyReport::ok() const {
  for (std::size_t v : violations)
    if (v != 0) return false;
  return true;
}

Vec basin_start(const PreparedInstance& inst, Rng& rng, double scale_factor, double margin_c) {
  const RateContext& ctx = inst.ctx;
  const std::size_t n = ctx.u_star.size();
  const Vec g = gaussian_vector(rng, n);
  const double gn = norm2(g);
  const double target = ctx.cos_phi + margin_c * ctx.sin_phi * ctx.sin_phi;
  double eps = scale_factor;
  for (int attempt = 0; attempt < 80; ++attempt, eps *= 0.5) {
    Vec u = ctx.u_star;
    axpy(eps / gn, g, u);
    const Vec bu = inst.b.matvec(u);
    const double c = std::abs(dot(u, ctx.w_star)) / (std::sqrt(dot(u, bu)) * ctx.norm_b);
    if (c > target && c < 1.0) return u;
  }
  throw Error(ErrorCode::OutsideBasin, "could not draw a start inside the basin");
}

PropertyReport validate_properties(const PreparedInstance& inst, std::size_t n_samples, std::uint64_t seed,
                                   const ValidateOptions& opts) {
  const RateContext& ctx = inst.ctx;
  const EigenProblem& p = inst.problem;
  const std::size_t n = p.dim;
  const double slack = opts.slack;
  const double f_star = -1.0 / ctx.lambda1;
  const Operator b_inv = [&](std::span<const double> v) { return inst.precond->apply_inv(v); };

  PropertyReport rep;
  rep.instance = p.label;
  rep.cos_phi_direct = ctx.cos_phi_direct;
  rep.cos_phi_variational = ctx.cos_phi;

  auto check = [&](std::size_t prop, std::size_t sample, double lhs, double rhs, const Vec& x) {
    ++rep.evaluated[prop];
    if (lhs >= rhs - slack) return;
    ++rep.violations[prop];
    if (rep.violations[prop] <= 3) rep.failures.push_back({prop, sample, lhs, rhs, x});
  };

  for (std::size_t k = 0; k < n_samples; ++k) {
    Rng rng(derive_seed(seed, k));
    Vec u = gaussian_vector(rng, n);
    if (k % 2 == 1) {
      // Points near x*, over several orders of magnitude of distance.
      const double eps = std::pow(10.0, -4.0 + 4.7 * rng.uniform_open0()) / norm2(u);
      Vec v = ctx.u_star;
      axpy(rng.uniform_open0() < 0.5 ? eps : -eps, u, v);
      u = std::move(v);
    }
    Vec bu = inst.b.matvec(u);
    const double nb = std::sqrt(dot(u, bu));
    scale(1.0 / nb, u);
    scale(1.0 / nb, bu);
    const IterateState s = make_state(u, p.apply_a, b_inv);
    const double theta = dist_chord(u, bu, ctx);
    const double fgap = s.f - f_star;

    check(0, k, fgap, s.g2 / (2.0 * gamma_x(s, ctx)), u);
    check(1, k, fgap, 0.5 * mu_x(s, ctx) * theta * theta, u);

    if (cos_dist(s, ctx) > ctx.cos_phi) {
      const double sign = dot(u, ctx.w_star) >= 0.0 ? 1.0 : -1.0;
      const double kfac = 2.0 * s.utu / (s.utau * s.utau);
      const double ratio = theta > 1e-300 ? theta / std::sin(theta) : 1.0;
      const double inner = -ratio * kfac * sign * dot(s.r, ctx.u_star) / ctx.norm_b;
      const double a = a_x(s, ctx, opts.flip_cos_phi_in_a);
      check(2, k, inner, 2.0 * a * fgap, u);
      if (a > 0.0) check(3, k, inner / a - 0.5 * mu_x(s, ctx) * theta * theta, fgap, u);
      const double xbx = sign * dot(u, ctx.u_star) / ctx.norm_b;
      check(4, k, xbx, ctx.norm_binv * ctx.norm_binv / (ctx.norm * ctx.norm) * (std::cos(theta) - ctx.cos_phi), u);
    }
  }

  if (ctx.kappa > 1.0 + 1e-12) check(5, 0, 1.0, ctx.cos_phi * ctx.cos_phi / (1.0 - 1.0 / ctx.kappa), ctx.u_star);

  if (opts.run_steps > 0) {
    Rng rng(derive_seed(seed, 0xc0de));
    const Vec u0 = basin_start(inst, rng, 1.0);
    SolveOptions so;
    so.tol = 1e-13;
    so.maxit = opts.run_steps;
    so.keep_iterates = true;
    const SolveResult run = rsd_solve(p, *inst.precond, u0, StepPolicy::theory(), so, &ctx);
    const auto& recs = run.trace.records;
    for (std::size_t t = 0; t + 1 < recs.size(); ++t) {
      const double d0 = recs[t].dist_b, d1 = recs[t + 1].dist_b;
      check(6, t, (1.0 - recs[t].xi) * d0 * d0, d1 * d1, run.iterates[t]);
    }
  }
  return rep;
}

EquivalenceReport equivalence_check(const PreparedInstance& inst, const Vec& u0, std::size_t steps) {
  const EigenProblem& p = inst.problem;
  SolveOptions so;
  so.tol = 0.0;
  so.maxit = steps;
  so.stagnation_guard = false;
  so.keep_iterates = true;
  const SolveResult run = rsd_solve(p, *inst.precond, u0, StepPolicy::theory(), so, &inst.ctx);

  const DenseSym b_half = matrix_sqrt(inst.b);
  const DenseSym b_mhalf = matrix_inv_sqrt(inst.b);
  const DenseSym a = p.to_dense();
  EquivalenceReport rep;
  for (std::size_t t = 0; t + 1 < run.iterates.size(); ++t) {
    const double eta = run.trace.records[t].eta;
    const Vec x = b_half.matvec(run.iterates[t]);
    const Vec binv_x = b_mhalf.matvec(b_mhalf.matvec(x));
    const Vec cx = b_mhalf.matvec(a.matvec(b_mhalf.matvec(x)));
    const double xcx = dot(x, cx);
    const double f = -dot(x, binv_x) / xcx;
    // Euclidean gradient -2 (B^{-1} x + f C x) / x^T C x, projected on the tangent space.
    Vec grad = binv_x;
    axpy(f, cx, grad);
    scale(-2.0 / xcx, grad);
    axpy(-dot(x, grad), x, grad);
    const Vec next = sphere_exp(UnitVector::from_unit(x), scaled(-eta, grad)).coords();
    const Vec u_oracle = b_mhalf.matvec(next);
    rep.max_deviation = std::max(rep.max_deviation, norm2(sub(u_oracle, run.iterates[t + 1])));
    ++rep.steps;
  }
  return rep;
}

}  // namespace rsdeig

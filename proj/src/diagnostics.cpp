#include "rsdeig/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rsdeig/cholesky.hpp"
#include "rsdeig/dense_eig.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/krylov.hpp"
#include "rsdeig/parallel.hpp"
#include "rsdeig/rng.hpp"

namespace rsdeig {

namespace {
constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
}

PhiPair cos_phi_direct(std::span<const double> u_star, std::span<const double> binv_u_star,
                       std::span<const double> b_u_star) {
  const double nn = dot(u_star, u_star);
  const double nb = std::sqrt(dot(u_star, b_u_star));
  const double nbinv = std::sqrt(dot(u_star, binv_u_star));
  PhiPair out;
  out.sin_phi = std::min(1.0, nn / (nb * nbinv));
  out.cos_phi = std::sqrt(std::max(0.0, 1.0 - out.sin_phi * out.sin_phi));
  return out;
}

double cos_phi_variational(std::span<const double> u_star, std::span<const double> b_u_star,
                           const Operator& apply_b_inv) {
  const double nn = dot(u_star, u_star);
  const double nb2 = dot(u_star, b_u_star);
  Vec v = Vec(u_star.begin(), u_star.end());
  axpy(-nn / nb2, b_u_star, v);
  if (norm2(v) <= 1e-14 * std::sqrt(nn)) return 0.0;
  // v* is the B^{-1}-orthogonal projection, so |v*^T B^{-1} u*| = ||v*||^2_{B^-1};
  // the norm ratio avoids the cancellation in that inner product.
  const double vv = dot(v, apply_b_inv(v));
  const double uu = dot(u_star, apply_b_inv(u_star));
  if (!(vv > 0.0)) return 0.0;
  return std::min(1.0, std::sqrt(vv / uu));
}

double theta_shao(std::span<const double> u_star, std::span<const double> b_u_star) {
  const double s = dot(u_star, b_u_star) / (norm2(b_u_star) * norm2(u_star));
  return std::asin(std::clamp(s, -1.0, 1.0));
}

SpectralBounds kappa_nu(const EigenProblem& p, const Preconditioner& b, const KappaOptions& opts) {
  SpectralBounds out;
  const std::size_t n = p.dim;
  if (n <= opts.dense_cap) {
    const CholFactor f = cholesky(p.to_dense());
    const DenseMatrix l = f.lower();
    DenseMatrix x(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      const Vec col = b.apply_inv(l.column(j));
      for (std::size_t i = 0; i < n; ++i) x(i, j) = col[i];
    }
    const DenseSym m = DenseSym::from_matrix(l.transpose() * x);
    const SymEigen eig = dense_sym_eig(m);
    out.nu_min = eig.values.front();
    out.nu_max = eig.values.back();
    out.iterations = 0;
  } else {
    LanczosOptions lo;
    lo.tol = opts.tol;
    lo.maxit = opts.maxit;
    lo.throw_on_maxit = false;
    const Operator binv = [&b](std::span<const double> v) { return b.apply_inv(v); };
    const LanczosResult r = lanczos_pencil(p.apply_a, binv, n, lo);
    out.nu_min = r.nu_min;
    out.nu_max = r.nu_max;
    out.iterations = r.iterations;
    out.converged = r.converged;
  }
  if (!(out.nu_min > 0.0)) throw Error(ErrorCode::NotSpd, "B^{-1}A has a non-positive eigenvalue estimate");
  out.kappa = out.nu_max / out.nu_min;
  return out;
}

double RateContext::phi() const { return std::atan2(sin_phi, cos_phi); }

RateContext make_rate_context(const ReferenceSpectrum& ref, const Operator& apply_a, const Preconditioner& b,
                              const SpectralBounds& nu) {
  RateContext ctx;
  ctx.lambda1 = ref.lambda1;
  ctx.lambda2 = ref.lambda2;
  ctx.lambdan = ref.lambdan;
  ctx.u_star = ref.u_star;
  ctx.w_star = b.apply_fwd(ctx.u_star);
  ctx.binv_u_star = b.apply_inv(ctx.u_star);
  ctx.norm = norm2(ctx.u_star);
  ctx.norm_a = std::sqrt(dot(ctx.u_star, apply_a(ctx.u_star)));
  ctx.norm_b = std::sqrt(dot(ctx.u_star, ctx.w_star));
  ctx.norm_binv = std::sqrt(dot(ctx.u_star, ctx.binv_u_star));
  const PhiPair phi = cos_phi_direct(ctx.u_star, ctx.binv_u_star, ctx.w_star);
  ctx.sin_phi = phi.sin_phi;
  ctx.cos_phi_direct = phi.cos_phi;
  ctx.cos_phi = cos_phi_variational(ctx.u_star, ctx.w_star, [&b](std::span<const double> v) { return b.apply_inv(v); });
  ctx.nu_min = nu.nu_min;
  ctx.nu_max = nu.nu_max;
  ctx.kappa = nu.kappa;
  return ctx;
}

double cos_dist(const IterateState& s, const RateContext& ctx) {
  return std::min(1.0, std::abs(dot(s.u, ctx.w_star)) / ctx.norm_b);
}

double dist_to_star(const IterateState& s, const RateContext& ctx) { return safe_acos(cos_dist(s, ctx)); }

double dist_chord(std::span<const double> u, std::span<const double> bu, const RateContext& ctx) {
  const double sign = dot(u, ctx.w_star) >= 0.0 ? 1.0 : -1.0;
  double chord2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - sign * ctx.u_star[i] / ctx.norm_b;
    const double bd = bu[i] - sign * ctx.w_star[i] / ctx.norm_b;
    chord2 += d * bd;
  }
  return 2.0 * std::asin(std::min(1.0, std::sqrt(std::max(0.0, chord2)) / 2.0));
}

double gamma_x(const IterateState& s, const RateContext& ctx) {
  return ctx.smoothness_factor * ctx.nu_max * (1.0 / ctx.lambda1 - 1.0 / ctx.lambdan) / s.utau;
}

double mu_x(const IterateState& s, const RateContext& ctx) {
  return 8.0 * ctx.nu_min * (1.0 / ctx.lambda1 - 1.0 / ctx.lambda2) * ctx.norm_b /
         (kPi2 * std::sqrt(s.utau) * ctx.norm_a);
}

double a_x(const IterateState& s, const RateContext& ctx, bool flip_cos_phi) {
  const double cphi = flip_cos_phi ? -ctx.cos_phi : ctx.cos_phi;
  return ctx.lambda1 * ctx.norm_binv * ctx.norm_binv * (cos_dist(s, ctx) - cphi) /
         (s.utau * ctx.norm * ctx.norm);
}

double xi_t(const IterateState& s, const RateContext& ctx) {
  // Signed: negative outside the basin, where no contraction is claimed.
  const double a = a_x(s, ctx);
  return a * std::abs(a) * mu_x(s, ctx) / gamma_x(s, ctx);
}

double xi_t_direct(const IterateState& s, const RateContext& ctx) {
  const double nb4 = std::pow(ctx.norm_binv, 4);
  const double n4 = std::pow(ctx.norm, 4);
  const double margin = cos_dist(s, ctx) - ctx.cos_phi;
  return 8.0 * ctx.lambda1 * ctx.lambda1 * ctx.norm_b * nb4 / (kPi2 * n4 * ctx.norm_a) * margin * std::abs(margin) /
         std::pow(s.utau, 1.5) * (1.0 / ctx.lambda1 - 1.0 / ctx.lambda2) /
         (ctx.smoothness_factor * ctx.kappa * (1.0 / ctx.lambda1 - 1.0 / ctx.lambdan));
}

double xi_inf(const RateContext& ctx) {
  const double c = 1.0 + ctx.cos_phi;
  return 8.0 / (kPi2 * c * c) * (1.0 / ctx.lambda1 - 1.0 / ctx.lambda2) /
         (ctx.smoothness_factor * ctx.kappa * (1.0 / ctx.lambda1 - 1.0 / ctx.lambdan));
}

double xi_inf_comparison(const RateContext& ctx) {
  const double rho = rho_classic(ctx.kappa, ctx.lambda1, ctx.lambda2);
  const double c = 1.0 + ctx.cos_phi;
  return (1.0 - rho) * 4.0 / (kPi2 * c * c) * (ctx.kappa + 1.0) / ctx.kappa / (1.0 - ctx.lambda1 / ctx.lambdan) /
         ctx.smoothness_factor;
}

double rho_b(double kappa) { return (kappa - 1.0) / (kappa + 1.0); }

double rho_classic(double kappa, double lambda1, double lambda2) {
  return 1.0 - (1.0 - rho_b(kappa)) * (1.0 - lambda1 / lambda2);
}

PrecondQuality precond_quality(const RateContext& ctx, bool nu_converged) {
  PrecondQuality q;
  q.nu_min = ctx.nu_min;
  q.nu_max = ctx.nu_max;
  q.kappa_nu = ctx.kappa;
  q.sin_phi = ctx.sin_phi;
  q.cos_phi = ctx.cos_phi_direct;
  q.cos_phi_variational = ctx.cos_phi;
  q.cos2_phi = ctx.cos_phi * ctx.cos_phi;
  q.one_minus_inv_kappa = 1.0 - 1.0 / ctx.kappa;
  if (q.one_minus_inv_kappa > 1e-12) q.chi = q.cos2_phi / q.one_minus_inv_kappa;
  q.theta_shao = theta_shao(ctx.u_star, ctx.w_star);
  q.rho_B = rho_b(ctx.kappa);
  q.rho = rho_classic(ctx.kappa, ctx.lambda1, ctx.lambda2);
  q.xi_inf = xi_inf(ctx);
  q.nu_converged = nu_converged;
  return q;
}

InitialCheck check_initial(std::span<const double> u0, std::span<const double> b_u0, const RateContext& ctx,
                           const Operator& apply_a) {
  InitialCheck out;
  const double u0_b = std::sqrt(dot(u0, b_u0));
  if (!(u0_b > 0.0)) throw Error(ErrorCode::ZeroVector, "start vector is zero");
  const double c = std::min(1.0, std::abs(dot(u0, ctx.w_star)) / (u0_b * ctx.norm_b));
  out.dist_b = safe_acos(c);
  out.phi = ctx.phi();
  out.condition_new = out.dist_b < out.phi;
  out.lambda_u0 = rayleigh(u0, apply_a);
  out.lambda2 = ctx.lambda2;
  out.condition_classic = out.lambda_u0 < ctx.lambda2;
  for (int k = 1; k <= 9; ++k) {
    const double cc = 0.05 * k;
    out.c_grid.push_back(cc);
    out.kappa_margin.push_back(c * c >= 1.0 - (1.0 - 2.0 * cc) / ctx.kappa);
  }
  return out;
}

std::pair<Vec, Vec> sample_start(const Preconditioner& b, Sampler sampler, std::uint64_t seed, std::size_t trial) {
  Rng rng(derive_seed(seed, trial));
  Vec omega = gaussian_vector(rng, b.dim());
  if (sampler == Sampler::Smooth) {
    Vec u0 = b.apply_inv(omega);
    return {std::move(u0), std::move(omega)};
  }
  Vec bu = b.apply_fwd(omega);
  return {std::move(omega), std::move(bu)};
}

SuccessCounts success_probability(const EigenProblem& p, const Preconditioner& b, const RateContext& ctx,
                                  Sampler sampler, std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  std::vector<char> ok_new(trials, 0), ok_classic(trials, 0);
  parallel_for(trials, [&](std::size_t k) {
    const auto [u0, bu0] = sample_start(b, sampler, seed, k);
    const InitialCheck chk = check_initial(u0, bu0, ctx, p.apply_a);
    ok_new[k] = chk.condition_new;
    ok_classic[k] = chk.condition_classic;
  });
  SuccessCounts out;
  out.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    out.new_successes += static_cast<std::size_t>(ok_new[k]);
    out.classic_successes += static_cast<std::size_t>(ok_classic[k]);
  }
  return out;
}

}  // namespace rsdeig

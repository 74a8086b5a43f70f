#include "rsdeig/solvers.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>

#include "rsdeig/error.hpp"
#include "rsdeig/geometry.hpp"

namespace rsdeig {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double distance(const Vec& u, const Vec* bu, const RateContext& ctx) {
  if (bu == nullptr) return safe_acos(std::abs(dot(u, ctx.w_star)) / ctx.norm_b);
  return dist_chord(u, *bu, ctx);
}

bool stagnated(const std::vector<TraceRecord>& recs, const SolveOptions& opts) {
  if (!opts.stagnation_guard || recs.size() <= opts.stagnation_window) return false;
  const TraceRecord& now = recs.back();
  const TraceRecord& then = recs[recs.size() - 1 - opts.stagnation_window];
  // lambda settles quadratically; the residual must have stalled too.
  return std::abs(now.lambda - then.lambda) <= 1e-15 * std::abs(now.lambda) && now.resnorm >= then.resnorm;
}

void fill_contractions(Trace& trace) {
  auto& r = trace.records;
  for (std::size_t t = 0; t + 1 < r.size(); ++t) r[t].contraction = (r[t + 1].dist_b * r[t + 1].dist_b) /
                                                                     (r[t].dist_b * r[t].dist_b);
  if (!r.empty()) r.back().contraction = kNan;
}

void write_value(std::ostream& out, double v) {
  if (std::isnan(v)) {
    out << "nan";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out << buf;
}

}  // namespace

StepPolicy StepPolicy::constant(double c) {
  if (!(c > 0.0 && c < 0.5)) throw Error(ErrorCode::InvalidC, "constant step needs 0 < c < 1/2");
  return {StepKind::ConstantCor, c};
}

StepPolicy StepPolicy::fixed(double eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw Error(ErrorCode::InvalidArgument, "fixed step must be positive");
  return {StepKind::Fixed, eta};
}

double step_theory(const IterateState& s, const RateContext& ctx) {
  if (cos_dist(s, ctx) <= ctx.cos_phi) throw Error(ErrorCode::OutsideBasin, "dist(x, x*) >= phi");
  return a_x(s, ctx) / gamma_x(s, ctx);
}

double step_constant(const RateContext& ctx, double c) {
  if (!(c > 0.0 && c < 0.5)) throw Error(ErrorCode::InvalidC, "constant step needs 0 < c < 1/2");
  return c / (ctx.kappa * ctx.kappa * (1.0 / ctx.lambda1 - 1.0 / ctx.lambdan));
}

double constant_step_rate(const RateContext& ctx, double c) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 1.0 - 8.0 * c * c * (1.0 / ctx.lambda1 - 1.0 / ctx.lambda2) /
                   (pi2 * std::pow(ctx.kappa, 4) * (1.0 / ctx.lambda1 - 1.0 / ctx.lambdan));
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ResidualTol:
      return "ResidualTol";
    case Termination::MaxIters:
      return "MaxIters";
    case Termination::StagnatedStep:
      return "StagnatedStep";
  }
  return "?";
}

void Trace::write_csv(std::ostream& out) const {
  out << "t,lambda,f,resnorm,distB,eta,eta_star,beta,xi,contraction\n";
  for (const auto& r : records) {
    out << r.t;
    for (double v : {r.lambda, r.f, r.resnorm, r.dist_b, r.eta, r.eta_star, r.beta, r.xi, r.contraction}) {
      out << ',';
      write_value(out, v);
    }
    out << '\n';
  }
}

SolveResult rsd_solve(const EigenProblem& p, const Preconditioner& b, const Vec& u0, const StepPolicy& policy,
                      const SolveOptions& opts, const RateContext* ctx) {
  if (u0.size() != p.dim || b.dim() != p.dim) throw Error(ErrorCode::DimensionMismatch, "start vector size");
  if (norm2(u0) == 0.0) throw Error(ErrorCode::ZeroVector, "start vector is zero");
  if (policy.kind != StepKind::Fixed && ctx == nullptr)
    throw Error(ErrorCode::InvalidArgument, "theory and constant steps need the reference context");
  const Operator b_inv = [&b](std::span<const double> v) { return b.apply_inv(v); };
  const bool exact = b.forward_mode() == ForwardMode::Exact;

  Vec u = u0;
  Vec bu = b.apply_fwd(u);
  {
    const double nb = std::sqrt(dot(u, bu));
    scale(1.0 / nb, u);
    scale(1.0 / nb, bu);
  }

  SolveResult res;
  std::size_t since_refresh = 0;
  for (std::size_t t = 0;; ++t) {
    IterateState s = make_state(u, p.apply_a, b_inv);
    TraceRecord rec;
    rec.t = t;
    rec.lambda = s.lambda;
    rec.f = s.f;
    rec.resnorm = norm2(s.r);
    rec.dist_b = ctx ? distance(u, exact ? &bu : nullptr, *ctx) : kNan;
    rec.eta = rec.eta_star = rec.beta = rec.xi = rec.contraction = kNan;
    if (opts.keep_iterates) res.iterates.push_back(u);
    res.trace.records.push_back(rec);
    res.iterations = t;
    res.lambda = s.lambda;

    if (rec.resnorm <= opts.tol * s.lambda * std::sqrt(s.utu)) {
      res.reason = Termination::ResidualTol;
      break;
    }
    if (stagnated(res.trace.records, opts)) {
      res.reason = Termination::StagnatedStep;
      break;
    }
    if (t >= opts.maxit) {
      res.reason = Termination::MaxIters;
      break;
    }
    const double g = std::sqrt(s.g2);
    if (!(g > 0.0)) throw Error(ErrorCode::ZeroGradientAtNonEigenvector, "zero gradient with nonzero residual");

    double eta = 0.0;
    switch (policy.kind) {
      case StepKind::TheoryLocal:
        eta = step_theory(s, *ctx);
        res.trace.records.back().xi = xi_t(s, *ctx);
        break;
      case StepKind::ConstantCor:
        eta = step_constant(*ctx, policy.value);
        break;
      case StepKind::Fixed:
        eta = policy.value;
        break;
    }
    if (!(eta * g < std::numbers::pi / 2.0))
      throw Error(ErrorCode::StepCapViolated, "step size violates eta < pi / (2 ||grad f||)");
    if (ctx && policy.kind == StepKind::Fixed && cos_dist(s, *ctx) <= ctx->cos_phi) res.trace.basin_exits.push_back(t);

    const double eta_star = 2.0 * std::tan(eta * g) * s.utu / (g * s.utau * s.utau);
    axpy(-eta_star, s.binv_r, u);
    double beta = 0.0;
    if (exact) {
      bu = b.apply_fwd(u);
      beta = 1.0 / std::sqrt(dot(u, bu));
      scale(beta, bu);
    } else if (++since_refresh >= opts.renorm_refresh) {
      since_refresh = 0;
      beta = 1.0 / std::sqrt(dot(u, b.apply_fwd(u)));
    } else {
      beta = std::cos(eta * g);
    }
    scale(beta, u);
    auto& last = res.trace.records.back();
    last.eta = eta;
    last.eta_star = eta_star;
    last.beta = beta;
  }
  fill_contractions(res.trace);
  res.u = std::move(u);
  return res;
}

SolveResult pinvit_classic_solve(const EigenProblem& p, const Preconditioner& b, const Vec& u0,
                                 const SolveOptions& opts, const RateContext* ctx) {
  if (u0.size() != p.dim || b.dim() != p.dim) throw Error(ErrorCode::DimensionMismatch, "start vector size");
  if (norm2(u0) == 0.0) throw Error(ErrorCode::ZeroVector, "start vector is zero");
  const Operator b_inv = [&b](std::span<const double> v) { return b.apply_inv(v); };
  const bool exact = b.forward_mode() == ForwardMode::Exact;
  Vec u = scaled(1.0 / norm2(u0), u0);

  SolveResult res;
  for (std::size_t t = 0;; ++t) {
    IterateState s = make_state(u, p.apply_a, b_inv);
    TraceRecord rec;
    rec.t = t;
    rec.lambda = s.lambda;
    rec.f = s.f;
    rec.resnorm = norm2(s.r);
    rec.dist_b = kNan;
    if (ctx && exact) {
      Vec bu = b.apply_fwd(u);
      const double nb = std::sqrt(dot(u, bu));
      Vec un = scaled(1.0 / nb, u);
      scale(1.0 / nb, bu);
      rec.dist_b = distance(un, &bu, *ctx);
    }
    rec.eta = rec.eta_star = rec.beta = rec.xi = rec.contraction = kNan;
    if (opts.keep_iterates) res.iterates.push_back(u);
    res.trace.records.push_back(rec);
    res.iterations = t;
    res.lambda = s.lambda;

    if (rec.resnorm <= opts.tol * s.lambda * std::sqrt(s.utu)) {
      res.reason = Termination::ResidualTol;
      break;
    }
    if (stagnated(res.trace.records, opts)) {
      res.reason = Termination::StagnatedStep;
      break;
    }
    if (t >= opts.maxit) {
      res.reason = Termination::MaxIters;
      break;
    }
    axpy(-1.0, s.binv_r, u);
    const double beta = 1.0 / norm2(u);
    scale(beta, u);
    auto& last = res.trace.records.back();
    last.eta = 1.0;
    last.eta_star = 1.0;
    last.beta = beta;
  }
  fill_contractions(res.trace);
  res.u = std::move(u);
  return res;
}

}  // namespace rsdeig

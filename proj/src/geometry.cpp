#include "rsdeig/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "rsdeig/error.hpp"

namespace rsdeig {

UnitVector::UnitVector(std::span<const double> v) : x_(v.begin(), v.end()) {
  const double nrm = norm2(x_);
  if (nrm == 0.0) throw Error(ErrorCode::ZeroVector, "cannot normalize a zero vector");
  scale(1.0 / nrm, x_);
}

UnitVector UnitVector::from_unit(Vec v) {
  if (std::abs(norm2(v) - 1.0) > 1e-12) throw Error(ErrorCode::InvalidArgument, "vector is not unit length");
  UnitVector out;
  out.x_ = std::move(v);
  return out;
}

double safe_acos(double c) { return std::acos(std::clamp(c, -1.0, 1.0)); }

double rayleigh(std::span<const double> u, const Operator& apply_a) {
  const double utu = dot(u, u);
  if (utu == 0.0) throw Error(ErrorCode::ZeroVector, "rayleigh quotient of a zero vector");
  return dot(u, apply_a(u)) / utu;
}

double f_value(std::span<const double> u, const Operator& apply_a) { return -1.0 / rayleigh(u, apply_a); }

IterateState make_state(Vec u, const Operator& apply_a, const Operator& apply_b_inv) {
  IterateState s;
  s.utu = dot(u, u);
  if (s.utu == 0.0) throw Error(ErrorCode::ZeroVector, "iterate is zero");
  s.au = apply_a(u);
  if (s.au.size() != u.size()) throw Error(ErrorCode::DimensionMismatch, "operator output size");
  s.utau = dot(u, s.au);
  s.lambda = s.utau / s.utu;
  s.f = -s.utu / s.utau;
  s.r = s.au;
  axpy(-s.lambda, u, s.r);
  s.binv_r = apply_b_inv(s.r);
  s.r_binv_r = std::max(0.0, dot(s.r, s.binv_r));
  s.u = std::move(u);
  s.g2 = grad_norm_sq(s);
  return s;
}

double grad_norm_sq(const IterateState& state) {
  const double c = 2.0 * state.utu / (state.utau * state.utau);
  return c * c * state.r_binv_r;
}

double grad_norm_sq(const IterateState& state, const Operator& apply_b_inv) {
  const double c = 2.0 * state.utu / (state.utau * state.utau);
  return c * c * std::max(0.0, dot(state.r, apply_b_inv(state.r)));
}

double dist_b_cached(std::span<const double> u, double u_bnorm, std::span<const double> w, double v_bnorm) {
  return safe_acos(std::abs(dot(u, w)) / (u_bnorm * v_bnorm));
}

double dist_b(std::span<const double> u, std::span<const double> v, const Operator& apply_b_fwd) {
  if (dot(u, u) == 0.0 || dot(v, v) == 0.0) throw Error(ErrorCode::ZeroVector, "dist_b of a zero vector");
  const Vec bu = apply_b_fwd(u);
  const Vec bv = apply_b_fwd(v);
  return dist_b_cached(u, std::sqrt(dot(u, bu)), bv, std::sqrt(dot(v, bv)));
}

UnitVector sphere_exp(const UnitVector& x, std::span<const double> tangent) {
  const double tn = norm2(tangent);
  if (std::abs(dot(x.coords(), tangent)) > 1e-10 * tn)
    throw Error(ErrorCode::NotTangent, "tangent vector not orthogonal to the base point");
  if (tn == 0.0) return x;
  Vec y = scaled(std::cos(tn), x.coords());
  axpy(std::sin(tn) / tn, tangent, y);
  return UnitVector(y);
}

Vec sphere_log(const UnitVector& x, const UnitVector& y) {
  const double c = dot(x.coords(), y.coords());
  Vec p = y.coords();
  axpy(-c, x.coords(), p);
  const double pn = norm2(p);
  if (pn < 1e-14) {
    if (c > 0.0) return Vec(x.size(), 0.0);
    throw Error(ErrorCode::AntipodalOrEqual, "log map undefined at the antipode");
  }
  // atan2 keeps full accuracy at both small and large angles.
  const double d = std::atan2(pn, c);
  scale(d / pn, p);
  return p;
}

double sphere_dist(const UnitVector& x, const UnitVector& y) { return safe_acos(dot(x.coords(), y.coords())); }

}  // namespace rsdeig

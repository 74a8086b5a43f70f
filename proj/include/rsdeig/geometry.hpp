#pragma once

#include <span>

#include "rsdeig/vector_ops.hpp"

namespace rsdeig {

// Point on the unit sphere; construction normalizes.
class UnitVector {
 public:
  UnitVector() = default;
  // Throws ZeroVector.
  explicit UnitVector(std::span<const double> v);
  // Accepts v as-is when | ||v|| - 1 | <= 1e-12, otherwise throws InvalidArgument.
  static UnitVector from_unit(Vec v);

  const Vec& coords() const noexcept { return x_; }
  std::size_t size() const noexcept { return x_.size(); }
  operator std::span<const double>() const noexcept { return x_; }

 private:
  Vec x_;
};

double rayleigh(std::span<const double> u, const Operator& apply_a);
// f = -u^T u / u^T A u. Minimum -1/lambda_1.
double f_value(std::span<const double> u, const Operator& apply_a);

// u-space iterate with cached quantities. The caller guarantees ||u||_B = 1;
// then x = B^{1/2} u is the matching point on the sphere.
struct IterateState {
  Vec u;
  Vec au;
  double utu = 0.0;
  double utau = 0.0;
  double lambda = 0.0;  // u^T A u / u^T u
  double f = 0.0;       // -u^T u / u^T A u
  Vec r;                // A u - lambda u
  Vec binv_r;
  double r_binv_r = 0.0;
  double g2 = 0.0;      // ||grad f(x)||^2
};

IterateState make_state(Vec u, const Operator& apply_a, const Operator& apply_b_inv);

// ||grad f(x)||^2 = (2 u^T u / (u^T A u)^2)^2 r^T B^{-1} r.
double grad_norm_sq(const IterateState& state);
// Recomputes B^{-1} r with the supplied operator.
double grad_norm_sq(const IterateState& state, const Operator& apply_b_inv);

// arccos(|u^T B v| / (||u||_B ||v||_B)); the sign of v is chosen so the cosine is >= 0.
double dist_b(std::span<const double> u, std::span<const double> v, const Operator& apply_b_fwd);
// Same angle from cached pieces: w = B v, norms in the B metric.
double dist_b_cached(std::span<const double> u, double u_bnorm, std::span<const double> w, double v_bnorm);

UnitVector sphere_exp(const UnitVector& x, std::span<const double> tangent);
Vec sphere_log(const UnitVector& x, const UnitVector& y);
double sphere_dist(const UnitVector& x, const UnitVector& y);

// arccos with the argument clamped to [-1, 1].
double safe_acos(double c);

}  // namespace rsdeig

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rsdeig/geometry.hpp"
#include "rsdeig/preconditioner.hpp"
#include "rsdeig/problems.hpp"
#include "rsdeig/vector_ops.hpp"

namespace rsdeig {

struct PhiPair {
  double sin_phi = 1.0;
  double cos_phi = 0.0;
};

// sin(phi) = ||u*||^2 / (||u*||_B ||u*||_{B^-1}).
PhiPair cos_phi_direct(std::span<const double> u_star, std::span<const double> binv_u_star,
                       std::span<const double> b_u_star);

// Closed-form supremum with v* = u* - (||u*||^2 / ||u*||_B^2) B u*. Returns 0
// when ||v*|| <= 1e-14 ||u*|| (u* is an eigenvector of B).
double cos_phi_variational(std::span<const double> u_star, std::span<const double> b_u_star,
                           const Operator& apply_b_inv);

// arcsin(||u*||_B^2 / (||B u*|| ||u*||)).
double theta_shao(std::span<const double> u_star, std::span<const double> b_u_star);

struct SpectralBounds {
  double nu_min = 0.0;
  double nu_max = 0.0;
  double kappa = 0.0;
  bool converged = true;
  std::size_t iterations = 0;
};

struct KappaOptions {
  std::size_t dense_cap = 200;
  double tol = 1e-10;
  std::size_t maxit = 1000;
};

// Extremal eigenvalues of B^{-1}A: Lanczos in the A inner product, or a dense
// eigensolve of L^T B^{-1} L (A = L L^T) when dim <= dense_cap.
SpectralBounds kappa_nu(const EigenProblem& p, const Preconditioner& b, const KappaOptions& opts = {});

// Every quantity the rate formulas need, with B u* applied once.
struct RateContext {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambdan = 0.0;
  Vec u_star;       // unit Euclidean norm
  Vec w_star;       // B u*
  Vec binv_u_star;  // B^{-1} u*
  double norm = 1.0;
  double norm_a = 0.0;
  double norm_b = 0.0;
  double norm_binv = 0.0;
  double sin_phi = 1.0;
  // Projection form ||v*||_{B^-1} / ||u*||_{B^-1}; free of the sqrt(1 - sin^2)
  // cancellation that limits the direct form to about 1e-8 near cos phi = 0.
  double cos_phi = 0.0;
  double cos_phi_direct = 0.0;
  double nu_min = 0.0;
  double nu_max = 0.0;
  double kappa = 0.0;
  // Multiplies gamma(x) (and divides the xi rates built on it). 1 reproduces the
  // stated constant; 2 is the constant the Rayleigh-quotient bound supports.
  double smoothness_factor = 1.0;
  double phi() const;
};

RateContext make_rate_context(const ReferenceSpectrum& ref, const Operator& apply_a, const Preconditioner& b,
                              const SpectralBounds& nu);

// The following assume ||u||_B = 1 for the state's iterate.
double cos_dist(const IterateState& s, const RateContext& ctx);
double dist_to_star(const IterateState& s, const RateContext& ctx);
// Angle from the B-norm chord ||u - x*||_B with bu = B u; accurate near zero.
double dist_chord(std::span<const double> u, std::span<const double> bu, const RateContext& ctx);
double gamma_x(const IterateState& s, const RateContext& ctx);
double mu_x(const IterateState& s, const RateContext& ctx);
// `flip_cos_phi` is a negative-control hook for the validation suite.
double a_x(const IterateState& s, const RateContext& ctx, bool flip_cos_phi = false);
// a |a| mu / gamma: the contraction with eta = a / gamma, negative outside the basin.
double xi_t(const IterateState& s, const RateContext& ctx);
// The same quantity written out term by term.
double xi_t_direct(const IterateState& s, const RateContext& ctx);
double xi_inf(const RateContext& ctx);
// xi_inf written through (1 - rho); the last factor is 1 / (1 - lambda_1/lambda_n).
double xi_inf_comparison(const RateContext& ctx);

double rho_b(double kappa);
double rho_classic(double kappa, double lambda1, double lambda2);

struct PrecondQuality {
  double nu_min = 0.0;
  double nu_max = 0.0;
  double kappa_nu = 0.0;
  double sin_phi = 1.0;
  double cos_phi = 0.0;  // direct form
  double cos_phi_variational = 0.0;
  double cos2_phi = 0.0;  // from the variational form
  double one_minus_inv_kappa = 0.0;
  std::optional<double> chi;  // undefined when kappa_nu = 1
  double theta_shao = 0.0;
  double rho_B = 0.0;
  double rho = 0.0;
  double xi_inf = 0.0;
  std::optional<double> epsilon_l;
  bool nu_converged = true;
};

PrecondQuality precond_quality(const RateContext& ctx, bool nu_converged = true);

struct InitialCheck {
  double dist_b = 0.0;
  double phi = 0.0;
  bool condition_new = false;
  double lambda_u0 = 0.0;
  double lambda2 = 0.0;
  bool condition_classic = false;
  std::vector<double> c_grid;
  std::vector<bool> kappa_margin;  // cos^2 dist >= 1 - (1 - 2c)/kappa
};

// b_u0 = B u0.
InitialCheck check_initial(std::span<const double> u0, std::span<const double> b_u0, const RateContext& ctx,
                           const Operator& apply_a);

enum class Sampler { Gaussian, Smooth };

struct SuccessCounts {
  std::size_t trials = 0;
  std::size_t new_successes = 0;
  std::size_t classic_successes = 0;
  double p_new() const { return trials ? static_cast<double>(new_successes) / static_cast<double>(trials) : 0.0; }
  double p_classic() const {
    return trials ? static_cast<double>(classic_successes) / static_cast<double>(trials) : 0.0;
  }
};

// Trial k draws omega from Rng(derive_seed(seed, k)); Gaussian uses u0 = omega,
// Smooth uses u0 = B^{-1} omega (then B u0 = omega exactly).
SuccessCounts success_probability(const EigenProblem& p, const Preconditioner& b, const RateContext& ctx,
                                  Sampler sampler, std::size_t trials, std::uint64_t seed);

// Draws one start vector and its B-image for trial k.
std::pair<Vec, Vec> sample_start(const Preconditioner& b, Sampler sampler, std::uint64_t seed, std::size_t trial);

}  // namespace rsdeig

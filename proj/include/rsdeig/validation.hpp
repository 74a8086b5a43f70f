#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rsdeig/dense.hpp"
#include "rsdeig/diagnostics.hpp"
#include "rsdeig/preconditioner.hpp"
#include "rsdeig/problems.hpp"
#include "rsdeig/rng.hpp"

namespace rsdeig {

// Identity; random G G^T / n + 0.1 I; L^ L^T from the binary32 factor of A
// (applied in binary64); A plus a random SPD perturbation.
enum class BKind { Identity, Random, MpChol, Perturbed };
const char* to_string(BKind k);

struct DenseInstance {
  std::size_t n = 0;
  BKind kind = BKind::Identity;
  std::uint64_t seed = 0;
  DenseSym a;
  DenseSym b;  // explicit B
};

// A = Q diag(lambda) Q^T with lambda uniform in [1, 10] and Q Haar-random orthogonal.
DenseSym random_spd(std::size_t n, Rng& rng, double lo = 1.0, double hi = 10.0);
DenseInstance random_instance(std::size_t n, BKind kind, std::uint64_t seed);

// Problem, preconditioner and full rate context for an instance.
struct PreparedInstance {
  EigenProblem problem;
  PrecondPtr precond;
  RateContext ctx;
  DenseSym b;
};
PreparedInstance prepare(const DenseInstance& inst);

inline constexpr std::size_t kPropertyCount = 7;
// (i) smoothness, (ii) quadratic growth, (iii) weak-quasi-convexity,
// (iv) weak-quasi-strong-convexity, (v) local lower bound on x^T B^{-1} x*,
// (vi) cos^2 phi <= 1 - 1/kappa, (vii) per-step contraction of a short run.
const char* property_name(std::size_t index);

struct PropertyFailure {
  std::size_t property = 0;
  std::size_t sample = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  Vec x;  // counterexample in u-space, ||u||_B = 1
};

struct PropertyReport {
  std::string instance;
  std::array<std::size_t, kPropertyCount> evaluated{};
  std::array<std::size_t, kPropertyCount> violations{};
  std::vector<PropertyFailure> failures;  // first few per property
  double cos_phi_direct = 0.0;
  double cos_phi_variational = 0.0;
  double cos_phi_gap() const;
  bool ok() const;
};

struct ValidateOptions {
  double slack = 1e-10;
  std::size_t run_steps = 30;
  bool flip_cos_phi_in_a = false;  // negative control
};

PropertyReport validate_properties(const PreparedInstance& inst, std::size_t n_samples, std::uint64_t seed,
                                   const ValidateOptions& opts = {});

// Runs `steps` theory steps in u-space and replays each one in x-space with
// explicit B^{1/2}, B^{-1/2} and the exponential map. Returns the largest
// per-step deviation ||u_oracle - u_{t+1}|| (both with ||u||_B = 1).
struct EquivalenceReport {
  std::size_t steps = 0;
  double max_deviation = 0.0;
};
EquivalenceReport equivalence_check(const PreparedInstance& inst, const Vec& u0, std::size_t steps);

// Start vector in the basin: u* perturbed by a Gaussian direction, shrunk until
// dist_B < phi (and the margin cos dist >= cos phi + margin_c sin^2 phi when margin_c > 0).
Vec basin_start(const PreparedInstance& inst, Rng& rng, double scale, double margin_c = 0.0);

}  // namespace rsdeig

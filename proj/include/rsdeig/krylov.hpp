#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "rsdeig/dense.hpp"
#include "rsdeig/vector_ops.hpp"

namespace rsdeig {

struct PcgResult {
  Vec x;
  std::size_t iterations = 0;
  double relative_residual = 0.0;
};

// Preconditioned CG for A x = rhs. An empty apply_m_inv means no preconditioner.
// Stops when ||rhs - A x|| <= tol ||rhs|| (true residual, checked on exit).
// Throws MaxIterationsError (best iterate) or BreakdownNonSpd.
PcgResult pcg(const Operator& apply_a, const Operator& apply_m_inv, std::span<const double> rhs, double tol,
              std::size_t maxit);

struct LanczosOptions {
  double tol = 1e-10;
  std::size_t maxit = 500;
  std::uint64_t seed = 0x5eedULL;
  // When false a non-converged run returns its best Ritz values with converged = false.
  bool throw_on_maxit = true;
};

struct LanczosResult {
  double nu_min = 0.0;
  double nu_max = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Extremal eigenvalues of an operator T that is self-adjoint in the inner
// product <x, y> = x^T W y. An empty apply_w means the Euclidean product.
// Full reorthogonalization; convergence when the Ritz residual bound
// beta_m |s_m| is below tol * |theta| for both ends.
LanczosResult lanczos_extremal(const Operator& apply_t, const Operator& apply_w, std::size_t dim,
                               const LanczosOptions& opts = {});

// Extremal eigenvalues of B^{-1}A in the A inner product; one A-matvec and one
// B^{-1}-apply per step.
LanczosResult lanczos_pencil(const Operator& apply_a, const Operator& apply_b_inv, std::size_t dim,
                             const LanczosOptions& opts = {});

struct RitzPairs {
  std::vector<double> values;  // descending, largest first
  std::vector<Vec> vectors;    // Euclidean-normalized
  std::size_t iterations = 0;
  bool converged = false;
};

// The `count` largest eigenpairs of a Euclidean-symmetric operator.
RitzPairs lanczos_largest(const Operator& apply_t, std::size_t dim, std::size_t count, const LanczosOptions& opts = {});

}  // namespace rsdeig

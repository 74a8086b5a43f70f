#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "rsdeig/cholesky.hpp"
#include "rsdeig/dense.hpp"
#include "rsdeig/sparse.hpp"
#include "rsdeig/vector_ops.hpp"

namespace rsdeig {

struct ReferenceSpectrum {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambdan = 0.0;
  Vec u_star;  // unit Euclidean norm, largest-magnitude entry positive
};

struct ReferenceOptions {
  std::size_t dense_cap = 5000;   // explicit dense problems up to this size
  std::size_t jacobi_cap = 200;   // full Jacobi oracle below this size
  double lanczos_tol = 1e-12;
  std::size_t lanczos_maxit = 600;
};

// Standard SPD eigenproblem A u = lambda u. For a generalized pencil (K, M) the
// operator is the reduced L^{-1} K L^{-T} with M = L L^T.
struct EigenProblem {
  std::size_t dim = 0;
  Operator apply_a;
  Operator solve_a;
  std::optional<DenseSym> dense;    // A when stored densely
  std::optional<SparseSym> sparse;  // A, or K for a pencil
  std::optional<SparseSym> mass;    // M for a pencil
  std::shared_ptr<const EnvelopeCholesky> mass_factor;
  std::optional<double> mesh_width;
  std::string label;
  // Largest |imaginary part| of the kernel formula (poly-complex kernels).
  std::optional<double> imaginary_term;

  std::optional<ReferenceSpectrum> reference;

  bool is_reduced() const noexcept { return mass_factor != nullptr; }
  // Computes and caches the reference spectrum.
  const ReferenceSpectrum& reference_spectrum(const ReferenceOptions& opts = {});
  // Explicit dense copy of A (from storage or by applying A to unit vectors).
  DenseSym to_dense() const;
};

EigenProblem make_dense_problem(DenseSym a, std::string label = "dense");
EigenProblem make_sparse_problem(SparseSym a, std::string label = "sparse");

EigenProblem laplace_fd(double h);
// Reduced pencil of the P1 stiffness and mass matrices.
EigenProblem laplace_fem(double h);

enum class KernelKind { Laplacian, PolyComplex };

struct KernelSpec {
  KernelKind kind = KernelKind::Laplacian;
  std::size_t n = 0;
  std::size_t d = 0;  // 0 means d = n
  std::uint64_t seed = 0;
  double tau = 0.0;
};

// Points are standard Gaussian vectors drawn from the seeded stream.
// Laplacian: exp(-||x_i - x_j|| / 2). Poly-complex: K(x_i,x_j) + K(y_i,y_j) +
// Im(K(x_i,y_j) - K(y_i,x_j)) with K(x,y) = (x^T y + 1)^3 and real points, so the
// last term vanishes and is reported in imaginary_term. Throws NotSpd.
EigenProblem kernel_matrix(const KernelSpec& spec);

// Pencil (A, M) reduced with the envelope Cholesky factor of M.
EigenProblem generalized_reduce(const SparseSym& a, const SparseSym& m, std::string label = "pencil");

// lambda_1, lambda_2, lambda_n and u*. Throws DegenerateSmallestEigenvalue when
// lambda_2 - lambda_1 <= 1e-9 lambda_n, NoConvergence when u* cannot be refined.
ReferenceSpectrum reference_eigs(const EigenProblem& p, const ReferenceOptions& opts = {});

}  // namespace rsdeig

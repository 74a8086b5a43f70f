#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsdeig/cholesky.hpp"
#include "rsdeig/dense.hpp"
#include "rsdeig/mesh.hpp"
#include "rsdeig/sparse.hpp"
#include "rsdeig/vector_ops.hpp"

namespace rsdeig {

enum class ForwardMode { Exact, Iterative };

// Tolerance for forward application of implicit preconditioners by nested PCG.
inline constexpr double kDefaultForwardTol = 1e-10;

// SPD operator B, given through B^{-1} and B.
class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  virtual std::size_t dim() const = 0;
  virtual Vec apply_inv(std::span<const double> v) const = 0;
  virtual Vec apply_fwd(std::span<const double> v) const = 0;
  virtual ForwardMode forward_mode() const = 0;
  // Relative residual target of apply_fwd when the mode is Iterative.
  virtual double forward_tol() const { return 0.0; }
  virtual std::string label() const = 0;
};

using PrecondPtr = std::shared_ptr<const Preconditioner>;

// Operators bound to a shared preconditioner.
Operator inv_operator(const PrecondPtr& p);
Operator fwd_operator(const PrecondPtr& p);

PrecondPtr make_identity(std::size_t n);
// B = A from A x = v solved by `solve_a` and B v = A v.
PrecondPtr make_exact(std::size_t n, Operator apply_a, Operator solve_a, std::string label = "exact");
PrecondPtr make_exact(const DenseSym& a);
PrecondPtr make_exact(const SparseSym& a);
// Explicit dense SPD B.
PrecondPtr make_dense(const DenseSym& b, std::string label = "dense");

// B = L^ L^T with L^ the binary32 Cholesky factor of A. By default both
// applications run in binary32; with `binary64_application` the same B is
// applied exactly in binary64.
PrecondPtr make_mp_cholesky(const DenseSym& a, bool binary64_application = false);

class ScaledPreconditioner final : public Preconditioner {
 public:
  // (B / eta)^{-1} = eta B^{-1}. Throws InvalidArgument unless eta > 0.
  ScaledPreconditioner(PrecondPtr inner, double eta);
  std::size_t dim() const override { return inner_->dim(); }
  Vec apply_inv(std::span<const double> v) const override;
  Vec apply_fwd(std::span<const double> v) const override;
  ForwardMode forward_mode() const override { return inner_->forward_mode(); }
  double forward_tol() const override { return inner_->forward_tol(); }
  std::string label() const override;
  double eta() const noexcept { return eta_; }
  const PrecondPtr& inner() const noexcept { return inner_; }

 private:
  PrecondPtr inner_;
  double eta_;
};

// Wraps p with eta = 2 / (nu_min + nu_max).
std::shared_ptr<const ScaledPreconditioner> spectral_scale(const PrecondPtr& p, double nu_min, double nu_max);
// max(|1 - eta nu_min|, |1 - eta nu_max|).
double rho_b_of_scaled(double eta, double nu_min, double nu_max);

// Two-level additive Schwarz:
// B^{-1} = P K_H^{-1} P^T + sum_j R_j^T K_j^{-1} R_j with K_H = P^T K P and K_j
// principal submatrices of K. B v is applied by PCG on B^{-1} preconditioned by K.
class DdmPreconditioner final : public Preconditioner {
 public:
  // An empty prolongation (zero columns) disables the coarse space.
  DdmPreconditioner(SparseSym a_fine, CsrMatrix prolongation, std::vector<std::vector<std::size_t>> subdomains,
                    double forward_tol = kDefaultForwardTol, std::string label = "ddm");

  std::size_t dim() const override { return a_.n(); }
  Vec apply_inv(std::span<const double> v) const override;
  Vec apply_fwd(std::span<const double> v) const override;
  ForwardMode forward_mode() const override { return ForwardMode::Iterative; }
  double forward_tol() const override { return forward_tol_; }
  std::string label() const override { return label_; }

  Vec coarse_contribution(std::span<const double> v) const;
  Vec local_contribution(std::size_t j, std::span<const double> v) const;
  std::size_t subdomain_count() const noexcept { return subdomains_.size(); }
  const SparseSym& coarse_matrix() const noexcept { return a_coarse_; }

 private:
  SparseSym a_;
  CsrMatrix p_;
  SparseSym a_coarse_;
  EnvelopeCholesky coarse_factor_;
  std::vector<std::vector<std::size_t>> subdomains_;
  std::vector<EnvelopeCholesky> local_factors_;
  double forward_tol_;
  std::string label_;
};

std::shared_ptr<const DdmPreconditioner> make_ddm(const MeshHierarchy& hierarchy, const SparseSym& a_fine,
                                                  double forward_tol = kDefaultForwardTol);

// Preconditioner for the reduced problem L^{-1} K L^{-T} with M = L L^T:
// B^-1 -> L^T B^{-1} L, B -> L^{-1} B L^{-T}.
class ReducedPreconditioner final : public Preconditioner {
 public:
  ReducedPreconditioner(PrecondPtr inner, std::shared_ptr<const EnvelopeCholesky> mass_factor);
  std::size_t dim() const override { return inner_->dim(); }
  Vec apply_inv(std::span<const double> v) const override;
  Vec apply_fwd(std::span<const double> v) const override;
  ForwardMode forward_mode() const override { return inner_->forward_mode(); }
  double forward_tol() const override { return inner_->forward_tol(); }
  std::string label() const override { return inner_->label() + " (mass-reduced)"; }

 private:
  PrecondPtr inner_;
  std::shared_ptr<const EnvelopeCholesky> factor_;
};

// Solves B^{-1} z = v by PCG with `apply_a` as preconditioner.
// Returns z with ||B^{-1} z - v|| <= tol ||v||. Throws MaxIterationsError.
Vec apply_fwd_iterative(const Preconditioner& p, std::span<const double> v, const Operator& apply_a, double tol,
                        std::size_t maxit = 2000);

struct EpsilonL {
  double value = 0.0;
  bool applicable = false;  // value < 1
};

// 4 n (3n + 1) (lambda_n / lambda_1) u with u = 2^-24.
EpsilonL epsilon_l(std::size_t n, double lambda1, double lambdan);

}  // namespace rsdeig

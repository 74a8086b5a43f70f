#include "rsdeig/preconditioner.hpp"

#include <cmath>
#include <sstream>

#include "rsdeig/error.hpp"
#include "rsdeig/krylov.hpp"
#include "rsdeig/parallel.hpp"

namespace rsdeig {

namespace {

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) throw Error(ErrorCode::DimensionMismatch, "preconditioner dimension mismatch");
}

class IdentityPreconditioner final : public Preconditioner {
 public:
  explicit IdentityPreconditioner(std::size_t n) : n_(n) {}
  std::size_t dim() const override { return n_; }
  Vec apply_inv(std::span<const double> v) const override {
    check_dim(n_, v.size());
    return Vec(v.begin(), v.end());
  }
  Vec apply_fwd(std::span<const double> v) const override { return apply_inv(v); }
  ForwardMode forward_mode() const override { return ForwardMode::Exact; }
  std::string label() const override { return "identity"; }

 private:
  std::size_t n_;
};

class OperatorPreconditioner final : public Preconditioner {
 public:
  OperatorPreconditioner(std::size_t n, Operator fwd, Operator inv, std::string label)
      : n_(n), fwd_(std::move(fwd)), inv_(std::move(inv)), label_(std::move(label)) {}
  std::size_t dim() const override { return n_; }
  Vec apply_inv(std::span<const double> v) const override {
    check_dim(n_, v.size());
    return inv_(v);
  }
  Vec apply_fwd(std::span<const double> v) const override {
    check_dim(n_, v.size());
    return fwd_(v);
  }
  ForwardMode forward_mode() const override { return ForwardMode::Exact; }
  std::string label() const override { return label_; }

 private:
  std::size_t n_;
  Operator fwd_;
  Operator inv_;
  std::string label_;
};

}  // namespace

Operator inv_operator(const PrecondPtr& p) {
  return [p](std::span<const double> v) { return p->apply_inv(v); };
}

Operator fwd_operator(const PrecondPtr& p) {
  return [p](std::span<const double> v) { return p->apply_fwd(v); };
}

PrecondPtr make_identity(std::size_t n) { return std::make_shared<IdentityPreconditioner>(n); }

PrecondPtr make_exact(std::size_t n, Operator apply_a, Operator solve_a, std::string label) {
  return std::make_shared<OperatorPreconditioner>(n, std::move(apply_a), std::move(solve_a), std::move(label));
}

PrecondPtr make_exact(const DenseSym& a) {
  auto factor = std::make_shared<CholFactor>(cholesky(a));
  return make_exact(a.n(), a.as_operator(), [factor](std::span<const double> v) { return chol_solve(*factor, v); });
}

PrecondPtr make_exact(const SparseSym& a) {
  auto factor = std::make_shared<EnvelopeCholesky>(a);
  return make_exact(a.n(), a.as_operator(), [factor](std::span<const double> v) { return factor->solve(v); });
}

PrecondPtr make_dense(const DenseSym& b, std::string label) {
  auto factor = std::make_shared<CholFactor>(cholesky(b));
  return make_exact(b.n(), b.as_operator(), [factor](std::span<const double> v) { return chol_solve(*factor, v); },
                    std::move(label));
}

PrecondPtr make_mp_cholesky(const DenseSym& a, bool binary64_application) {
  auto factor = std::make_shared<CholFactor>(cholesky(a, Precision::binary32));
  if (binary64_application)
    return make_exact(
        a.n(), [factor](std::span<const double> v) { return factor->multiply_llt_binary64(v); },
        [factor](std::span<const double> v) { return chol_solve_binary64(*factor, v); }, "mp-chol (binary64 apply)");
  return make_exact(
      a.n(), [factor](std::span<const double> v) { return factor->multiply_llt(v); },
      [factor](std::span<const double> v) { return chol_solve(*factor, v); }, "mp-chol");
}

ScaledPreconditioner::ScaledPreconditioner(PrecondPtr inner, double eta) : inner_(std::move(inner)), eta_(eta) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw Error(ErrorCode::InvalidArgument, "scale eta must be positive");
}

Vec ScaledPreconditioner::apply_inv(std::span<const double> v) const {
  Vec out = inner_->apply_inv(v);
  scale(eta_, out);
  return out;
}

Vec ScaledPreconditioner::apply_fwd(std::span<const double> v) const {
  Vec out = inner_->apply_fwd(v);
  scale(1.0 / eta_, out);
  return out;
}

std::string ScaledPreconditioner::label() const {
  std::ostringstream os;
  os.precision(6);
  os << "scaled(" << eta_ << ", " << inner_->label() << ")";
  return os.str();
}

std::shared_ptr<const ScaledPreconditioner> spectral_scale(const PrecondPtr& p, double nu_min, double nu_max) {
  if (!(nu_min > 0.0) || nu_max < nu_min) throw Error(ErrorCode::InvalidArgument, "need 0 < nu_min <= nu_max");
  return std::make_shared<ScaledPreconditioner>(p, 2.0 / (nu_max + nu_min));
}

double rho_b_of_scaled(double eta, double nu_min, double nu_max) {
  return std::max(std::abs(1.0 - eta * nu_min), std::abs(1.0 - eta * nu_max));
}

DdmPreconditioner::DdmPreconditioner(SparseSym a_fine, CsrMatrix prolongation,
                                     std::vector<std::vector<std::size_t>> subdomains, double forward_tol,
                                     std::string label)
    : a_(std::move(a_fine)),
      p_(std::move(prolongation)),
      subdomains_(std::move(subdomains)),
      forward_tol_(forward_tol),
      label_(std::move(label)) {
  const std::size_t n = a_.n();
  if (p_.cols() > 0) {
    check_dim(n, p_.rows());
    a_coarse_ = a_.galerkin(p_);
    coarse_factor_ = EnvelopeCholesky(a_coarse_);
  }
  std::vector<char> covered(n, 0);
  local_factors_.resize(subdomains_.size());
  for (std::size_t j = 0; j < subdomains_.size(); ++j) {
    const auto& idx = subdomains_[j];
    if (idx.empty()) throw Error(ErrorCode::EmptySubdomain, "subdomain " + std::to_string(j) + " is empty");
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] >= n || (k > 0 && idx[k] <= idx[k - 1]))
        throw Error(ErrorCode::InvalidArgument, "subdomain indices must be ascending and in range");
      covered[idx[k]] = 1;
    }
    local_factors_[j] = EnvelopeCholesky(a_.principal_submatrix(idx));
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!covered[i]) throw Error(ErrorCode::InvalidArgument, "fine node not covered by any subdomain");
}

Vec DdmPreconditioner::coarse_contribution(std::span<const double> v) const {
  if (p_.cols() == 0) return Vec(a_.n(), 0.0);
  return p_.matvec(coarse_factor_.solve(p_.transpose_matvec(v)));
}

Vec DdmPreconditioner::local_contribution(std::size_t j, std::span<const double> v) const {
  const auto& idx = subdomains_[j];
  Vec restricted(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) restricted[k] = v[idx[k]];
  const Vec local = local_factors_[j].solve(restricted);
  Vec out(a_.n(), 0.0);
  for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] = local[k];
  return out;
}

Vec DdmPreconditioner::apply_inv(std::span<const double> v) const {
  check_dim(a_.n(), v.size());
  std::vector<Vec> locals(subdomains_.size());
  parallel_for(subdomains_.size(), [&](std::size_t j) {
    const auto& idx = subdomains_[j];
    Vec restricted(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) restricted[k] = v[idx[k]];
    locals[j] = local_factors_[j].solve(restricted);
  });
  Vec out = coarse_contribution(v);
  for (std::size_t j = 0; j < subdomains_.size(); ++j) {
    const auto& idx = subdomains_[j];
    for (std::size_t k = 0; k < idx.size(); ++k) out[idx[k]] += locals[j][k];
  }
  return out;
}

Vec DdmPreconditioner::apply_fwd(std::span<const double> v) const {
  return apply_fwd_iterative(*this, v, a_.as_operator(), forward_tol_);
}

std::shared_ptr<const DdmPreconditioner> make_ddm(const MeshHierarchy& hierarchy, const SparseSym& a_fine,
                                                  double forward_tol) {
  check_dim(hierarchy.fine_dim(), a_fine.n());
  std::ostringstream label;
  label << "ddm(H=" << hierarchy.H << ",h=" << hierarchy.h << ",overlap=" << hierarchy.overlap_ratio << ")";
  return std::make_shared<DdmPreconditioner>(a_fine, hierarchy.prolongation, hierarchy.subdomains, forward_tol,
                                             label.str());
}

ReducedPreconditioner::ReducedPreconditioner(PrecondPtr inner, std::shared_ptr<const EnvelopeCholesky> mass_factor)
    : inner_(std::move(inner)), factor_(std::move(mass_factor)) {
  check_dim(inner_->dim(), factor_->n());
}

Vec ReducedPreconditioner::apply_inv(std::span<const double> v) const {
  return factor_->multiply_upper(inner_->apply_inv(factor_->multiply_lower(v)));
}

Vec ReducedPreconditioner::apply_fwd(std::span<const double> v) const {
  return factor_->solve_lower(inner_->apply_fwd(factor_->solve_upper(v)));
}

Vec apply_fwd_iterative(const Preconditioner& p, std::span<const double> v, const Operator& apply_a, double tol,
                        std::size_t maxit) {
  const Operator b_inv = [&p](std::span<const double> x) { return p.apply_inv(x); };
  return pcg(b_inv, apply_a, v, tol, maxit).x;
}

EpsilonL epsilon_l(std::size_t n, double lambda1, double lambdan) {
  if (!(lambda1 > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda1 must be positive");
  const double nn = static_cast<double>(n);
  EpsilonL out;
  out.value = 4.0 * nn * (3.0 * nn + 1.0) * (lambdan / lambda1) * unit_roundoff(Precision::binary32);
  out.applicable = out.value < 1.0;
  return out;
}

}  // namespace rsdeig

#include "rsdeig/problems.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "rsdeig/dense_eig.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/geometry.hpp"
#include "rsdeig/krylov.hpp"
#include "rsdeig/mesh.hpp"
#include "rsdeig/rng.hpp"

namespace rsdeig {

namespace {

void orient(Vec& u) {
  std::size_t k = 0;
  for (std::size_t i = 1; i < u.size(); ++i)
    if (std::abs(u[i]) > std::abs(u[k])) k = i;
  if (u[k] < 0.0) scale(-1.0, u);
}

}  // namespace

const ReferenceSpectrum& EigenProblem::reference_spectrum(const ReferenceOptions& opts) {
  if (!reference) reference = reference_eigs(*this, opts);
  return *reference;
}

DenseSym EigenProblem::to_dense() const {
  if (dense) return *dense;
  if (sparse && !is_reduced()) return sparse->to_dense();
  DenseMatrix m(dim, dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const Vec col = apply_a(unit_vector(dim, j));
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = col[i];
  }
  return DenseSym::from_matrix(m);
}

EigenProblem make_dense_problem(DenseSym a, std::string label) {
  EigenProblem p;
  p.dim = a.n();
  auto factor = std::make_shared<CholFactor>(cholesky(a));
  p.dense = std::move(a);
  p.apply_a = p.dense->as_operator();
  p.solve_a = [factor](std::span<const double> v) { return chol_solve(*factor, v); };
  p.label = std::move(label);
  return p;
}

EigenProblem make_sparse_problem(SparseSym a, std::string label) {
  EigenProblem p;
  p.dim = a.n();
  auto factor = std::make_shared<EnvelopeCholesky>(a);
  p.sparse = std::move(a);
  p.apply_a = p.sparse->as_operator();
  p.solve_a = [factor](std::span<const double> v) { return factor->solve(v); };
  p.label = std::move(label);
  return p;
}

EigenProblem laplace_fd(double h) {
  std::ostringstream label;
  label << "laplace-fd(h=" << h << ")";
  EigenProblem p = make_sparse_problem(laplace_fd_matrix(h), label.str());
  p.mesh_width = h;
  return p;
}

EigenProblem laplace_fem(double h) {
  FemMatrices fem = fem_p1(h);
  std::ostringstream label;
  label << "laplace-fem(h=" << h << ")";
  EigenProblem p = generalized_reduce(fem.stiffness, fem.mass, label.str());
  p.mesh_width = h;
  return p;
}

EigenProblem kernel_matrix(const KernelSpec& spec) {
  if (spec.n < 2) throw Error(ErrorCode::InvalidArgument, "kernel matrix needs n >= 2");
  if (spec.tau < 0.0) throw Error(ErrorCode::InvalidArgument, "kernel shift tau must be >= 0");
  const std::size_t n = spec.n;
  const std::size_t d = spec.d == 0 ? n : spec.d;
  Rng rng(spec.seed);
  std::vector<Vec> x(n), y;
  for (auto& xi : x) xi = gaussian_vector(rng, d);
  DenseSym a(n);
  double imag_max = 0.0;
  std::ostringstream label;
  if (spec.kind == KernelKind::Laplacian) {
    label << "kernel-laplace(n=" << n << ",d=" << d << ",seed=" << spec.seed << ",tau=" << spec.tau << ")";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += (x[i][k] - x[j][k]) * (x[i][k] - x[j][k]);
        a.set(i, j, std::exp(-0.5 * std::sqrt(s)) + (i == j ? spec.tau : 0.0));
      }
  } else {
    label << "kernel-poly(n=" << n << ",d=" << d << ",seed=" << spec.seed << ",tau=" << spec.tau << ")";
    y.resize(n);
    for (auto& yi : y) yi = gaussian_vector(rng, d);
    auto kern = [](std::span<const double> u, std::span<const double> v) {
      const std::complex<double> s(dot(u, v) + 1.0, 0.0);
      return s * s * s;
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) {
        const std::complex<double> cross = kern(x[i], y[j]) - kern(y[i], x[j]);
        imag_max = std::max(imag_max, std::abs(cross.imag()));
        const double v = kern(x[i], x[j]).real() + kern(y[i], y[j]).real() + cross.imag();
        a.set(i, j, v + (i == j ? spec.tau : 0.0));
      }
  }
  try {
    EigenProblem p = make_dense_problem(std::move(a), label.str());
    if (spec.kind == KernelKind::PolyComplex) p.imaginary_term = imag_max;
    return p;
  } catch (const NotSpdError& e) {
    throw Error(ErrorCode::NotSpd, std::string(e.what()) + " (increase the diagonal shift tau)");
  }
}

EigenProblem generalized_reduce(const SparseSym& a, const SparseSym& m, std::string label) {
  if (a.n() != m.n()) throw Error(ErrorCode::DimensionMismatch, "pencil matrices differ in size");
  auto mf = std::make_shared<const EnvelopeCholesky>(m);
  auto af = std::make_shared<const EnvelopeCholesky>(a);
  EigenProblem p;
  p.dim = a.n();
  p.sparse = a;
  p.mass = m;
  p.mass_factor = mf;
  auto a_ptr = std::make_shared<const SparseSym>(a);
  p.apply_a = [a_ptr, mf](std::span<const double> v) { return mf->solve_lower(a_ptr->matvec(mf->solve_upper(v))); };
  p.solve_a = [af, mf](std::span<const double> v) { return mf->multiply_upper(af->solve(mf->multiply_lower(v))); };
  p.label = std::move(label);
  return p;
}

ReferenceSpectrum reference_eigs(const EigenProblem& p, const ReferenceOptions& opts) {
  const std::size_t n = p.dim;
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "empty problem");
  if (p.dense && n > opts.dense_cap)
    throw Error(ErrorCode::InvalidArgument, "dense problem exceeds the reference eigensolver cap");
  ReferenceSpectrum ref;
  if (n <= opts.jacobi_cap) {
    const SymEigen eig = dense_sym_eig(p.to_dense());
    ref.u_star = eig.vectors.column(0);
    ref.lambda2 = n > 1 ? eig.values[1] : std::numeric_limits<double>::infinity();
    ref.lambdan = eig.values.back();
  } else {
    LanczosOptions lo;
    lo.tol = opts.lanczos_tol;
    lo.maxit = opts.lanczos_maxit;
    lo.throw_on_maxit = false;
    const RitzPairs top = lanczos_largest(p.solve_a, n, 2, lo);
    ref.u_star = top.vectors[0];
    ref.lambda2 = 1.0 / top.values[1];
    lo.tol = 1e-10;
    ref.lambdan = lanczos_extremal(p.apply_a, Operator{}, n, lo).nu_max;
  }

  // Inverse-iteration polish of u*; lambda_1 from the Rayleigh quotient.
  Vec u = ref.u_star;
  scale(1.0 / norm2(u), u);
  double lambda = rayleigh(u, p.apply_a);
  double res = 0.0;
  for (int step = 0; step < 30; ++step) {
    Vec au = p.apply_a(u);
    lambda = dot(u, au);
    axpy(-lambda, u, au);
    res = norm2(au);
    if (step >= 2 && res <= 1e-12 * lambda) break;
    u = p.solve_a(u);
    scale(1.0 / norm2(u), u);
  }
  if (res > 1e-10 * lambda) throw Error(ErrorCode::NoConvergence, "reference eigenvector residual above 1e-10");
  orient(u);
  ref.u_star = std::move(u);
  ref.lambda1 = lambda;
  ref.lambdan = std::max(ref.lambdan, ref.lambda1);
  if (ref.lambda2 - ref.lambda1 <= 1e-9 * ref.lambdan)
    throw Error(ErrorCode::DegenerateSmallestEigenvalue, "smallest eigenvalue is not simple at working accuracy");
  return ref;
}

}  // namespace rsdeig

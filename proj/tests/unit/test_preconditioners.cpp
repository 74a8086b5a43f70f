#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "rsdeig/diagnostics.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/geometry.hpp"
#include "rsdeig/mesh.hpp"
#include "rsdeig/preconditioner.hpp"
#include "rsdeig/problems.hpp"

using namespace rsdeig;

namespace {

RateContext context_for(EigenProblem& p, const Preconditioner& b) {
  return make_rate_context(p.reference_spectrum(), p.apply_a, b, kappa_nu(p, b));
}

}  // namespace

TEST_CASE("identity preconditioner") {
  const PrecondPtr b = make_identity(4);
  const Vec v{1.0, -2.0, 0.5, 3.0};
  CHECK(b->apply_inv(v) == v);
  CHECK(b->apply_fwd(v) == v);

  EigenProblem p = make_dense_problem(oracle::random_spd(10, 51));
  const RateContext ctx = context_for(p, *make_identity(10));
  CHECK(ctx.cos_phi == 0.0);
  CHECK(ctx.cos_phi_direct <= 1e-7);
  CHECK(ctx.kappa == doctest::Approx(ctx.lambdan / ctx.lambda1).epsilon(1e-10));
}

TEST_CASE("exact preconditioner") {
  const DenseSym a = oracle::random_spd(10, 52);
  const PrecondPtr b = make_exact(a);
  const Vec w = oracle::random_vec(10, 53);
  CHECK(norm2(sub(b->apply_inv(a.matvec(w)), w)) <= 1e-12 * norm2(w));

  EigenProblem p = make_dense_problem(a);
  const RateContext ctx = context_for(p, *b);
  CHECK(ctx.kappa == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(ctx.cos_phi <= 1e-10);
}

TEST_CASE("mixed-precision cholesky preconditioner") {
  SUBCASE("identity is reproduced exactly") {
    const PrecondPtr b = make_mp_cholesky(DenseSym::identity(5));
    // binary32-representable input
    Vec v = oracle::random_vec(5, 54);
    for (double& x : v) x = static_cast<float>(x);
    CHECK(b->apply_inv(v) == v);
    CHECK(b->apply_fwd(v) == v);
  }
  SUBCASE("spectral equivalence through the perturbation norm") {
    const DenseSym a = oracle::random_spd(64, 55, 1.0);
    const PrecondPtr b = make_mp_cholesky(a);
    const DenseSym binv = oracle::materialize([&](std::span<const double> v) { return b->apply_inv(v); }, 64);
    const DenseSym ah = matrix_sqrt(a);
    const DenseSym e = oracle::congruence(ah, binv);
    const SymEigen ee = dense_sym_eig(e);
    const double eps = std::max(std::abs(1.0 - ee.values.front()), std::abs(1.0 - ee.values.back()));
    REQUIRE(eps < 1.0);
    EigenProblem p = make_dense_problem(a);
    const SpectralBounds nu = kappa_nu(p, *b);
    CHECK(nu.kappa <= (1.0 + eps) / (1.0 - eps) * (1.0 + 1e-10));
  }
  SUBCASE("Laplacian kernel, n = 256") {
    KernelSpec ks;
    ks.n = 256;
    ks.seed = 7;
    EigenProblem p = kernel_matrix(ks);
    const PrecondPtr b = make_mp_cholesky(*p.dense);
    const RateContext ctx = context_for(p, *b);
    const EpsilonL el = epsilon_l(256, ctx.lambda1, ctx.lambdan);
    REQUIRE(el.applicable);
    CHECK(ctx.cos_phi <= std::sqrt(2.0 * el.value));
  }
}

TEST_CASE("epsilon_l arithmetic") {
  const EpsilonL one = epsilon_l(1, 3.0, 3.0);
  CHECK(one.value == doctest::Approx(16.0 * std::ldexp(1.0, -24)).epsilon(1e-14));
  CHECK(one.applicable);
  const EpsilonL big = epsilon_l(256, 1.0, 1000.0);
  CHECK(big.value == doctest::Approx(4.0 * 256 * 769 * 1000 * std::ldexp(1.0, -24)).epsilon(1e-14));
  CHECK(big.value == doctest::Approx(46.9).epsilon(1e-3));
  CHECK_FALSE(big.applicable);
}

TEST_CASE("one subdomain and no coarse space is the exact inverse") {
  const SparseSym a = laplace_fd_matrix(0.25);
  std::vector<std::size_t> all(a.n());
  for (std::size_t i = 0; i < a.n(); ++i) all[i] = i;
  const auto b = std::make_shared<DdmPreconditioner>(a, CsrMatrix(), std::vector<std::vector<std::size_t>>{all});
  const Vec w = oracle::random_vec(a.n(), 56);
  CHECK(norm2(sub(b->apply_inv(a.matvec(w)), w)) <= 1e-12 * norm2(w));
  EigenProblem p = make_sparse_problem(a);
  CHECK(kappa_nu(p, *b).kappa == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("additive Schwarz on the FEM pencil") {
  EigenProblem p = laplace_fem(1.0 / 16);
  const MeshHierarchy hier = mesh_hierarchy(0.25, 1.0 / 16, 0.5);
  const PrecondPtr b = std::make_shared<ReducedPreconditioner>(make_ddm(hier, *p.sparse), p.mass_factor);
  const RateContext ctx = context_for(p, *b);
  CHECK(ctx.cos_phi * ctx.cos_phi == doctest::Approx(0.1961).epsilon(0.06 / 0.1961));
  CHECK(1.0 - 1.0 / ctx.kappa == doctest::Approx(0.8221).epsilon(0.06 / 0.8221));
}

TEST_CASE("forward application by nested PCG") {
  const SparseSym a = laplace_fd_matrix(1.0 / 16);
  const Operator apply_a = a.as_operator();
  const Vec v = oracle::random_vec(a.n(), 57);

  const Vec z = apply_fwd_iterative(*make_identity(a.n()), v, apply_a, 1e-12);
  CHECK(norm2(sub(z, v)) <= 1e-12 * norm2(v));

  const PrecondPtr exact = make_exact(a);
  const Vec av = apply_fwd_iterative(*exact, v, apply_a, 1e-12);
  CHECK(norm2(sub(av, a.matvec(v))) <= 1e-10 * norm2(a.matvec(v)));

  EigenProblem p = laplace_fd(1.0 / 16);
  const Vec& us = p.reference_spectrum().u_star;
  const PrecondPtr ddm = make_ddm(mesh_hierarchy(0.25, 1.0 / 16, 0.5), a);
  const Vec z1 = apply_fwd_iterative(*ddm, us, apply_a, 1e-10);
  const Vec z2 = apply_fwd_iterative(*ddm, us, apply_a, 1e-11);
  CHECK(norm2(sub(ddm->apply_inv(z1), us)) <= 1e-10 * norm2(us));
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Vec u = oracle::random_vec(a.n(), 580 + s);
    const double ub = std::sqrt(dot(u, apply_fwd_iterative(*ddm, u, apply_a, 1e-13)));
    const double d1 = dist_b_cached(u, ub, z1, std::sqrt(dot(us, z1)));
    const double d2 = dist_b_cached(u, ub, z2, std::sqrt(dot(us, z2)));
    CHECK(std::abs(d1 - d2) <= 1e-8);
  }
}

TEST_CASE("spectral scaling") {
  const PrecondPtr id = make_identity(3);
  const auto s1 = spectral_scale(id, 2.0, 2.0);
  CHECK(s1->eta() == doctest::Approx(0.5));
  CHECK(rho_b_of_scaled(s1->eta(), 2.0, 2.0) == doctest::Approx(0.0));
  const auto s2 = spectral_scale(id, 1.0, 3.0);
  CHECK(s2->eta() == doctest::Approx(0.5));
  CHECK(rho_b_of_scaled(s2->eta(), 1.0, 3.0) == doctest::Approx(0.5));
  const Vec v{1.0, 2.0, 3.0};
  CHECK(s2->apply_inv(v)[2] == doctest::Approx(1.5));
  CHECK(s2->apply_fwd(v)[2] == doctest::Approx(6.0));
  CHECK_THROWS_AS(ScaledPreconditioner(id, 0.0), Error);
}

TEST_CASE("scaled error propagator norm on a random pencil") {
  const DenseSym a = oracle::random_spd(25, 58);
  const DenseSym bm = oracle::random_spd(25, 59);
  const PrecondPtr b = make_dense(bm);
  EigenProblem p = make_dense_problem(a);
  const SpectralBounds nu = kappa_nu(p, *b);
  const auto sc = spectral_scale(b, nu.nu_min, nu.nu_max);
  // ||I - eta B^{-1} A||_A equals the spectral norm of I - eta A^{1/2} B^{-1} A^{1/2}.
  const DenseSym m = oracle::congruence(matrix_sqrt(a), oracle::inverse(bm));
  const SymEigen e = dense_sym_eig(m);
  double nrm = 0.0;
  for (double mu : e.values) nrm = std::max(nrm, std::abs(1.0 - sc->eta() * mu));
  CHECK(nrm == doctest::Approx((nu.kappa - 1.0) / (nu.kappa + 1.0)).epsilon(1e-8));
}

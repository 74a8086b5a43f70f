#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "rsdeig/cholesky.hpp"
#include "rsdeig/dense_eig.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/krylov.hpp"
#include "rsdeig/matrix_market.hpp"
#include "rsdeig/mesh.hpp"
#include "rsdeig/rng.hpp"
#include "rsdeig/sparse.hpp"

using namespace rsdeig;

TEST_CASE("cholesky of identity and diagonal matrices") {
  const CholFactor f = cholesky(DenseSym::identity(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j <= i; ++j) CHECK(f.l(i, j) == (i == j ? 1.0 : 0.0));

  const Vec d{4.0, 9.0};
  const CholFactor g = cholesky(DenseSym::diagonal(d));
  CHECK(g.l(0, 0) == 2.0);
  CHECK(g.l(1, 1) == 3.0);
  CHECK(g.l(1, 0) == 0.0);
}

TEST_CASE("binary32 cholesky backward error") {
  const DenseSym a = oracle::random_spd(8, 1);
  const CholFactor f = cholesky(a, Precision::binary32);
  const DenseMatrix l = f.lower();
  DenseMatrix diff(8, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 8; ++k) s += l(i, k) * l(j, k);
      diff(i, j) = s - a(i, j);
    }
  const double bound = 10.0 * 8.0 * std::ldexp(1.0, -24) * oracle::cond(a);
  CHECK(diff.frobenius_norm() / a.frobenius_norm() <= bound);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j <= i; ++j) CHECK(static_cast<double>(static_cast<float>(f.l(i, j))) == f.l(i, j));
}

TEST_CASE("cholesky rejects indefinite input") {
  const DenseSym m = DenseSym::from_rows({{1.0, 2.0}, {2.0, 1.0}});
  CHECK_THROWS_AS(cholesky(m), NotSpdError);
  try {
    cholesky(m, Precision::binary32);
  } catch (const NotSpdError& e) {
    CHECK(e.code() == ErrorCode::NotSpdInLowPrecision);
    CHECK(e.pivot() == 1);
  }
}

TEST_CASE("chol_solve") {
  const Vec v{0.3, -1.0, 2.5};
  const Vec x = chol_solve(cholesky(DenseSym::identity(3)), v);
  for (std::size_t i = 0; i < 3; ++i) CHECK(x[i] == v[i]);

  const Vec y = chol_solve(cholesky(DenseSym::diagonal(Vec{4.0, 9.0})), Vec{4.0, 9.0});
  CHECK(y[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(1.0).epsilon(1e-15));

  const DenseSym a = oracle::random_spd(8, 1);
  const Vec e1 = unit_vector(8, 0);
  const Vec lo = chol_solve(cholesky(a, Precision::binary32), e1);
  const Vec hi = chol_solve(cholesky(a), e1);
  CHECK(norm2(sub(lo, hi)) / norm2(hi) <= oracle::cond(a) * 1e-5);
}

TEST_CASE("pcg") {
  const Vec v{1.0, -2.0, 3.0};
  const PcgResult r = pcg(identity_operator(), identity_operator(), v, 1e-12, 10);
  CHECK(r.iterations == 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.x[i] == doctest::Approx(v[i]));

  const DenseSym d = DenseSym::diagonal(Vec{1.0, 2.0, 4.0});
  const PcgResult s = pcg(d.as_operator(), {}, Vec{1.0, 1.0, 1.0}, 1e-12, 10);
  CHECK(s.iterations <= 3);
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.x[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.x[2] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("pcg on the finite difference Laplacian") {
  const SparseSym a = laplace_fd_matrix(1.0 / 16);
  const Vec b = oracle::random_vec(a.n(), 2);
  const PcgResult r = pcg(a.as_operator(), {}, b, 1e-10, 1000);
  const Vec res = sub(b, a.matvec(r.x));
  CHECK(norm2(res) <= 1e-10 * norm2(b));
  const Vec direct = EnvelopeCholesky(a).solve(b);
  CHECK(norm2(sub(r.x, direct)) / norm2(direct) <= 1e-7);
  const std::size_t ref_its = oracle::cg_iterations(a.as_operator(), b, 1e-10, 1000);
  CHECK(std::abs(static_cast<long>(r.iterations) - static_cast<long>(ref_its)) <= 1);
}

TEST_CASE("pcg hits the iteration cap") {
  const SparseSym a = laplace_fd_matrix(1.0 / 16);
  const Vec b = oracle::random_vec(a.n(), 2);
  CHECK_THROWS_AS(pcg(a.as_operator(), {}, b, 1e-14, 3), MaxIterationsError);
}

TEST_CASE("lanczos extremal values") {
  const DenseSym d = DenseSym::diagonal(Vec{1.0, 2.0, 4.0});
  const LanczosResult r = lanczos_extremal(d.as_operator(), {}, 3);
  CHECK(r.nu_min == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.nu_max == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("lanczos on a random pencil") {
  const DenseSym a = oracle::random_spd(30, 10);
  const DenseSym b = oracle::random_spd(30, 11);
  const DenseSym binv = oracle::inverse(b);
  const LanczosResult r = lanczos_pencil(a.as_operator(), binv.as_operator(), 30);
  const DenseSym bm = matrix_inv_sqrt(b);
  const SymEigen e = dense_sym_eig(oracle::congruence(bm, a));
  CHECK(std::abs(r.nu_min - e.values.front()) <= 1e-8 * e.values.front());
  CHECK(std::abs(r.nu_max - e.values.back()) <= 1e-8 * e.values.back());
}

TEST_CASE("lanczos reproduces the FD condition number") {
  const double h = 1.0 / 8;
  const SparseSym a = laplace_fd_matrix(h);
  const LanczosResult r = lanczos_extremal(a.as_operator(), {}, a.n());
  const double expected = oracle::fd_eigenvalue(h, 7, 7) / oracle::fd_eigenvalue(h, 1, 1);
  CHECK(std::abs(r.nu_max / r.nu_min - expected) <= 1e-6 * expected);
}

TEST_CASE("dense symmetric eigensolver") {
  const SymEigen e = dense_sym_eig(DenseSym::diagonal(Vec{3.0, 1.0, 2.0}));
  CHECK(e.values == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(2, 1)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 2)) == doctest::Approx(1.0));

  const SymEigen t = dense_sym_eig(DenseSym::from_rows({{2.0, 1.0}, {1.0, 2.0}}));
  CHECK(t.values[0] == doctest::Approx(1.0));
  CHECK(t.values[1] == doctest::Approx(3.0));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(t.vectors(0, 0) * s - t.vectors(1, 0) * s) == doctest::Approx(1.0));
  CHECK(std::abs(t.vectors(0, 1) * s + t.vectors(1, 1) * s) == doctest::Approx(1.0));
}

TEST_CASE("dense eigensolver reconstruction") {
  Rng rng(3);
  DenseSym m(20);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j <= i; ++j) m.set(i, j, rng.normal());
  const SymEigen e = dense_sym_eig(m);
  for (std::size_t k = 0; k < 20; ++k) {
    const Vec v = e.vectors.column(k);
    const Vec r = sub(m.matvec(v), scaled(e.values[k], v));
    CHECK(norm2(r) <= 1e-10 * m.frobenius_norm());
    if (k > 0) CHECK(e.values[k - 1] <= e.values[k]);
  }
}

TEST_CASE("gaussian vectors") {
  Rng a(0), b(0), c(1);
  const Vec x = gaussian_vector(a, 4);
  CHECK(x == gaussian_vector(b, 4));
  CHECK(x != gaussian_vector(c, 4));

  Rng r(5);
  const std::size_t n = 100000;
  const Vec v = gaussian_vector(r, n);
  double mean = 0.0;
  for (double t : v) mean += t;
  mean /= n;
  double var = 0.0;
  for (double t : v) var += (t - mean) * (t - mean);
  var /= n - 1;
  CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(var - 1.0) <= 0.05);
}

TEST_CASE("derived seeds separate streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
}

TEST_CASE("sparse symmetric assembly and Galerkin product") {
  const SparseSym a = SparseSym::from_triplets(3, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 0, -1.0}, {1, 1, 2.0},
                                                   {1, 2, -1.0}, {2, 1, -1.0}, {2, 2, 2.0}, {0, 0, 1.0}});
  CHECK(a.at(0, 0) == 3.0);
  CHECK(a.at(0, 2) == 0.0);
  CHECK_THROWS_AS(SparseSym::from_triplets(2, {{0, 1, 1.0}, {1, 0, 2.0}}), Error);

  const CsrMatrix p = CsrMatrix::from_triplets(3, 1, {{0, 0, 0.5}, {1, 0, 1.0}, {2, 0, 0.5}});
  const SparseSym g = a.galerkin(p);
  const Vec pc{0.5, 1.0, 0.5};
  CHECK(g.at(0, 0) == doctest::Approx(dot(pc, a.matvec(pc))));
}

TEST_CASE("matrix market round trip") {
  const SparseSym a = laplace_fd_matrix(0.25);
  std::stringstream s;
  write_matrix_market(s, a);
  const SparseSym b = read_matrix_market(s);
  REQUIRE(b.n() == a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) CHECK(a.at(i, j) == b.at(i, j));

  std::istringstream bad("%%MatrixMarket matrix coordinate complex symmetric\n1 1 1\n1 1 1 0\n");
  CHECK_THROWS_AS(read_matrix_market(bad), Error);
}

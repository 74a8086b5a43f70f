#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "oracles.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/mesh.hpp"
#include "rsdeig/problems.hpp"

using namespace rsdeig;

namespace {

constexpr double kTwoPi2 = 2.0 * std::numbers::pi * std::numbers::pi;

double smallest_pencil_value(const SparseSym& k, const SparseSym& m) {
  const DenseSym mh = matrix_inv_sqrt(m.to_dense());
  return dense_sym_eig(oracle::congruence(mh, k.to_dense())).values.front();
}

}  // namespace

TEST_CASE("finite difference Laplacian") {
  EigenProblem one = laplace_fd(0.5);
  REQUIRE(one.dim == 1);
  CHECK(one.apply_a(Vec{1.0})[0] == doctest::Approx(16.0).epsilon(1e-15));

  EigenProblem p = laplace_fd(0.25);
  const double s = std::sin(std::numbers::pi / 8);
  CHECK(std::abs(p.reference_spectrum().lambda1 - 128.0 * s * s) <= 1e-10);
  CHECK(p.reference_spectrum().lambda1 == doctest::Approx(18.7452).epsilon(1e-5));

  CHECK_THROWS_AS(laplace_fd(0.3), Error);
  CHECK_THROWS_AS(laplace_fd(1.0), Error);
}

TEST_CASE("FD eigenvector is the sampled sine product") {
  const double h = 1.0 / 16;
  EigenProblem p = laplace_fd(h);
  const std::size_t m = 15;
  Vec s(m * m);
  for (std::size_t j = 1; j <= m; ++j)
    for (std::size_t i = 1; i <= m; ++i)
      s[(j - 1) * m + (i - 1)] = std::sin(std::numbers::pi * i * h) * std::sin(std::numbers::pi * j * h);
  CHECK(oracle::angle(s, p.reference_spectrum().u_star) <= 1e-8);
}

TEST_CASE("FD reference spectrum matches the analytic formula") {
  const double h = 1.0 / 8;
  EigenProblem p = laplace_fd(h);
  const ReferenceSpectrum& r = p.reference_spectrum();
  CHECK(std::abs(r.lambda1 - oracle::fd_eigenvalue(h, 1, 1)) <= 1e-10);
  CHECK(std::abs(r.lambda2 - oracle::fd_eigenvalue(h, 1, 2)) <= 1e-10);
  CHECK(std::abs(r.lambdan - oracle::fd_eigenvalue(h, 7, 7)) <= 1e-10);
}

TEST_CASE("P1 element matrices") {
  const FemMatrices one = fem_p1(0.5);
  REQUIRE(one.stiffness.n() == 1);
  CHECK(one.stiffness.at(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(one.mass.at(0, 0) == doctest::Approx(0.125).epsilon(1e-15));

  const double h = 1.0 / 8;
  const FemMatrices f = fem_p1(h);
  const std::size_t m = 7;
  for (std::size_t j = 2; j + 2 <= m + 1; ++j)
    for (std::size_t i = 2; i + 2 <= m + 1; ++i) {
      const std::size_t row = (j - 1) * m + (i - 1);
      double sum = 0.0;
      for (std::size_t c = 0; c < f.stiffness.n(); ++c) sum += f.stiffness.at(row, c);
      CHECK(std::abs(sum) <= 1e-13);
    }
}

TEST_CASE("FEM pencil eigenvalue approximates the continuous one") {
  EigenProblem p = laplace_fem(1.0 / 16);
  CHECK(std::abs(p.reference_spectrum().lambda1 - kTwoPi2) <= 0.02 * kTwoPi2);
}

TEST_CASE("FD and FEM errors decay at second order") {
  const double fd_ratio = (laplace_fd(1.0 / 8).reference_spectrum().lambda1 - kTwoPi2) /
                          (laplace_fd(1.0 / 16).reference_spectrum().lambda1 - kTwoPi2);
  const double fem_ratio = (laplace_fem(1.0 / 8).reference_spectrum().lambda1 - kTwoPi2) /
                           (laplace_fem(1.0 / 16).reference_spectrum().lambda1 - kTwoPi2);
  for (double r : {fd_ratio, fem_ratio}) {
    CHECK(std::abs(r) >= 4.0 / 1.5);
    CHECK(std::abs(r) <= 4.0 * 1.5);
  }
}

TEST_CASE("mesh hierarchy, smallest case") {
  const MeshHierarchy h = mesh_hierarchy(0.5, 0.25, 0.5);
  REQUIRE(h.subdomains.size() == 4);
  std::set<std::vector<std::size_t>> got(h.subdomains.begin(), h.subdomains.end());
  const std::set<std::vector<std::size_t>> want = {{0, 1, 3, 4}, {1, 2, 4, 5}, {3, 4, 6, 7}, {4, 5, 7, 8}};
  CHECK(got == want);
  CHECK(h.coarse_dim() == 1);
  CHECK(h.prolongation.rows() == 9);
  CHECK(h.prolongation.cols() == 1);
  // P1 interpolation of the coarse hat on triangles cut along the SW-NE diagonal.
  const double p1[9] = {0.5, 0.5, 0.0, 0.5, 1.0, 0.5, 0.0, 0.5, 0.5};
  for (std::size_t i = 0; i < 9; ++i) CHECK(h.prolongation.at(i, 0) == doctest::Approx(p1[i]));
}

TEST_CASE("mesh hierarchy covers every fine node") {
  const MeshHierarchy h = mesh_hierarchy(0.25, 1.0 / 16, 0.5);
  CHECK(h.subdomains.size() == 16);
  std::vector<int> hits(h.fine_dim(), 0);
  for (const auto& s : h.subdomains) {
    CHECK(std::is_sorted(s.begin(), s.end()));
    for (std::size_t i : s) ++hits[i];
  }
  CHECK(std::all_of(hits.begin(), hits.end(), [](int c) { return c >= 1; }));
  CHECK_THROWS_AS(mesh_hierarchy(0.25, 1.0 / 16, 0.3), Error);
  CHECK_THROWS_AS(mesh_hierarchy(1.0 / 16, 0.25, 0.5), Error);
}

TEST_CASE("Laplacian kernel matrix") {
  KernelSpec ks;
  ks.n = 12;
  ks.d = 3;
  ks.seed = 5;
  const EigenProblem p = kernel_matrix(ks);
  const DenseSym& a = *p.dense;
  Rng rng(5);
  std::vector<Vec> x(12);
  for (auto& xi : x) xi = gaussian_vector(rng, 3);
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(a(i, i) == 1.0);
    for (std::size_t j = 0; j < 12; ++j) CHECK(a(i, j) == doctest::Approx(std::exp(-norm2(sub(x[i], x[j])) / 2)));
  }
}

TEST_CASE("polynomial kernel with real points") {
  KernelSpec ks;
  ks.kind = KernelKind::PolyComplex;
  ks.n = 8;
  ks.seed = 11;
  const EigenProblem p = kernel_matrix(ks);
  Rng rng(11);
  std::vector<Vec> x(8), y(8);
  for (auto& v : x) v = gaussian_vector(rng, 8);
  for (auto& v : y) v = gaussian_vector(rng, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      const double kx = std::pow(dot(x[i], x[j]) + 1.0, 3);
      const double ky = std::pow(dot(y[i], y[j]) + 1.0, 3);
      CHECK((*p.dense)(i, j) == doctest::Approx(kx + ky).epsilon(1e-12));
    }
  REQUIRE(p.imaginary_term.has_value());
  CHECK(*p.imaginary_term <= 1e-16);
}

TEST_CASE("generalized reduction") {
  const SparseSym a = laplace_fd_matrix(0.25);
  EigenProblem same = generalized_reduce(a, SparseSym::identity(a.n()));
  const Vec v = oracle::random_vec(a.n(), 61);
  CHECK(norm2(sub(same.apply_a(v), a.matvec(v))) <= 1e-13 * norm2(a.matvec(v)));

  const SparseSym d = SparseSym::from_dense(DenseSym::diagonal(Vec{2.0, 6.0}));
  const SparseSym m = SparseSym::from_dense(DenseSym::diagonal(Vec{1.0, 2.0}));
  EigenProblem dp = generalized_reduce(d, m);
  CHECK(dp.reference_spectrum().lambda1 == doctest::Approx(2.0));
  CHECK(dp.reference_spectrum().lambdan == doctest::Approx(3.0));

  const FemMatrices f = fem_p1(1.0 / 8);
  EigenProblem fp = generalized_reduce(f.stiffness, f.mass);
  CHECK(std::abs(fp.reference_spectrum().lambda1 - smallest_pencil_value(f.stiffness, f.mass)) <= 1e-10);
}

TEST_CASE("reference spectrum") {
  EigenProblem p = make_dense_problem(DenseSym::diagonal(Vec{1.0, 2.0, 4.0}));
  const ReferenceSpectrum& r = p.reference_spectrum();
  CHECK(r.lambda1 == doctest::Approx(1.0));
  CHECK(r.lambda2 == doctest::Approx(2.0));
  CHECK(r.lambdan == doctest::Approx(4.0));
  CHECK(r.u_star[0] == doctest::Approx(1.0));

  KernelSpec ks;
  ks.n = 128;
  ks.seed = 7;
  EigenProblem k = kernel_matrix(ks);
  const ReferenceSpectrum& kr = k.reference_spectrum();
  const SymEigen e = dense_sym_eig(*k.dense);
  CHECK(kr.lambda1 == doctest::Approx(e.values.front()).epsilon(1e-10));
  CHECK(kr.lambda2 == doctest::Approx(e.values[1]).epsilon(1e-10));
  CHECK(kr.lambdan == doctest::Approx(e.values.back()).epsilon(1e-10));
  const Vec res = sub(k.apply_a(kr.u_star), scaled(kr.lambda1, kr.u_star));
  CHECK(norm2(res) <= 1e-10 * kr.lambdan);

  EigenProblem deg = make_dense_problem(DenseSym::diagonal(Vec{1.0, 1.0, 3.0}));
  CHECK_THROWS_AS(deg.reference_spectrum(), Error);
}

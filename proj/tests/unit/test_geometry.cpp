#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rsdeig/error.hpp"
#include "rsdeig/geometry.hpp"

using namespace rsdeig;

namespace {

const DenseSym kDiag = DenseSym::diagonal(Vec{1.0, 2.0, 4.0});

// u with ||u||_B = 1.
Vec b_normalized(Vec u, const DenseSym& b) {
  scale(1.0 / std::sqrt(dot(u, b.matvec(u))), u);
  return u;
}

}  // namespace

TEST_CASE("rayleigh quotient") {
  const Operator a = kDiag.as_operator();
  CHECK(rayleigh(unit_vector(3, 0), a) == 1.0);
  CHECK(rayleigh(Vec{1.0, 1.0, 1.0}, a) == doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  const Vec v{0.3, -0.7, 1.1};
  CHECK(rayleigh(scaled(-4.5, v), a) == doctest::Approx(rayleigh(v, a)).epsilon(1e-14));
}

TEST_CASE("objective value") {
  const Operator a = kDiag.as_operator();
  CHECK(f_value(unit_vector(3, 0), a) == -1.0);
  CHECK(f_value(Vec{1.0, 1.0, 1.0}, a) == doctest::Approx(-3.0 / 7.0).epsilon(1e-15));

  const DenseSym ad = oracle::random_spd(12, 21);
  const DenseSym bd = oracle::random_spd(12, 22);
  const oracle::XSpace xs(ad, bd);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Vec u = oracle::random_vec(12, 100 + s);
    CHECK(f_value(u, ad.as_operator()) == doctest::Approx(xs.f(xs.to_x(u))).epsilon(1e-12));
  }
}

TEST_CASE("gradient norm vanishes at the eigenvector") {
  const Operator a = kDiag.as_operator();
  const IterateState s = make_state(unit_vector(3, 0), a, identity_operator());
  CHECK(s.g2 == 0.0);
  CHECK(norm2(s.r) == 0.0);
}

TEST_CASE("gradient norm against the dense x-space gradient") {
  SUBCASE("identity preconditioner") {
    const oracle::XSpace xs(kDiag, DenseSym::identity(3));
    const Vec u = scaled(1.0 / std::sqrt(3.0), Vec{1.0, 1.0, 1.0});
    const IterateState s = make_state(u, kDiag.as_operator(), identity_operator());
    const Vec g = xs.grad(xs.to_x(u));
    CHECK(s.g2 == doctest::Approx(dot(g, g)).epsilon(1e-13));
  }
  SUBCASE("random pair") {
    const DenseSym ad = oracle::random_spd(15, 31);
    const DenseSym bd = oracle::random_spd(15, 32);
    const DenseSym binv = oracle::inverse(bd);
    const oracle::XSpace xs(ad, bd);
    for (std::uint64_t k = 0; k < 5; ++k) {
      const Vec u = b_normalized(oracle::random_vec(15, 300 + k), bd);
      const IterateState s = make_state(u, ad.as_operator(), binv.as_operator());
      const Vec g = xs.grad(xs.to_x(u));
      CHECK(std::abs(s.g2 - dot(g, g)) <= 1e-10 * dot(g, g));
      CHECK(grad_norm_sq(s, binv.as_operator()) == doctest::Approx(s.g2).epsilon(1e-12));
    }
  }
}

TEST_CASE("B-metric angle") {
  const Vec u{1.0, 2.0, -1.0};
  CHECK(dist_b(u, u, identity_operator()) == 0.0);
  CHECK(dist_b(u, scaled(-3.0, u), identity_operator()) == 0.0);
  CHECK(dist_b(Vec{1.0, 0.0}, Vec{0.0, 2.0}, identity_operator()) == doctest::Approx(std::numbers::pi / 2));

  const DenseSym b = oracle::random_spd(10, 41);
  const oracle::XSpace xs(DenseSym::identity(10), b);
  const Vec p = oracle::random_vec(10, 42), q = oracle::random_vec(10, 43);
  CHECK(dist_b(p, q, b.as_operator()) == doctest::Approx(oracle::angle(xs.to_x(p), xs.to_x(q))).epsilon(1e-12));
}

TEST_CASE("sphere exponential map") {
  const UnitVector x(Vec{0.6, 0.8, 0.0});
  const UnitVector y = sphere_exp(x, Vec{0.0, 0.0, 0.0});
  CHECK(y.coords() == x.coords());

  const UnitVector e1(unit_vector(2, 0));
  const UnitVector e2 = sphere_exp(e1, Vec{0.0, std::numbers::pi / 2});
  CHECK(std::abs(e2.coords()[0]) <= 1e-15);
  CHECK(e2.coords()[1] == doctest::Approx(1.0));

  for (std::uint64_t s = 0; s < 10; ++s) {
    const UnitVector p(oracle::random_vec(5, 500 + s));
    Vec t = oracle::random_vec(5, 600 + s);
    axpy(-dot(t, p.coords()), p.coords(), t);
    scale(0.3 * static_cast<double>(s + 1) / norm2(t), t);  // |t| up to 3 < pi
    CHECK(sphere_dist(p, sphere_exp(p, t)) == doctest::Approx(norm2(t)).epsilon(1e-12));
  }
}

TEST_CASE("sphere logarithm") {
  const UnitVector x(Vec{0.0, 1.0, 0.0});
  CHECK(norm2(sphere_log(x, x)) == 0.0);

  const UnitVector e1(unit_vector(2, 0));
  const UnitVector mid(Vec{1.0, 1.0});
  const Vec l = sphere_log(e1, mid);
  CHECK(std::abs(l[0]) <= 1e-15);
  CHECK(l[1] == doctest::Approx(std::numbers::pi / 4));

  for (std::uint64_t s = 0; s < 20; ++s) {
    const UnitVector p(oracle::random_vec(6, 700 + s));
    Vec q = p.coords();
    axpy(0.4, oracle::random_vec(6, 800 + s), q);
    const UnitVector qq(q);
    if (sphere_dist(p, qq) >= std::numbers::pi / 2) continue;
    const UnitVector back = sphere_exp(p, sphere_log(p, qq));
    CHECK(norm2(sub(back.coords(), qq.coords())) <= 1e-12);
  }
  CHECK_THROWS_AS(sphere_log(e1, UnitVector(Vec{-1.0, 0.0})), Error);
}

TEST_CASE("sphere distance") {
  const UnitVector e1(unit_vector(3, 0)), e2(unit_vector(3, 1)), m1(Vec{-1.0, 0.0, 0.0});
  CHECK(sphere_dist(e1, e1) == 0.0);
  CHECK(sphere_dist(e1, e2) == doctest::Approx(std::numbers::pi / 2));
  CHECK(sphere_dist(e1, m1) == doctest::Approx(std::numbers::pi));
}

TEST_CASE("unit vectors") {
  CHECK_THROWS_AS(UnitVector(Vec{0.0, 0.0}), Error);
  CHECK_THROWS_AS(UnitVector::from_unit(Vec{1.0, 1.0}), Error);
  CHECK(norm2(UnitVector(Vec{3.0, 4.0}).coords()) == doctest::Approx(1.0));
}

#include <doctest.h>

#include "alsigns/arith.hpp"
#include "oracles.hpp"

#include <random>

using namespace alsigns;

TEST_CASE("factor") {
  CHECK(factor(1).factors.empty());
  CHECK(factor(12).factors == std::vector<std::pair<i64, int>>{{2, 2}, {3, 1}});
  CHECK(factor(2310).factors == std::vector<std::pair<i64, int>>{{2, 1}, {3, 1}, {5, 1}, {7, 1}, {11, 1}});
  CHECK_THROWS_AS(factor(0), std::invalid_argument);
  CHECK_THROWS_AS(factor(-6), std::invalid_argument);
}

TEST_CASE("factor is multiplicative on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> u(1, 1'000'000);
  for (int i = 0; i < 2000; ++i) {
    i64 a = u(rng), b = u(rng);
    CHECK(multiply(factor(a), factor(b)) == factor(a * b));
  }
}

TEST_CASE("kronecker examples") {
  CHECK(kronecker(5, 1) == 1);
  CHECK(kronecker(-11, 2) == -1);
  CHECK(kronecker(-5, 3) == 1);
  CHECK(kronecker(-4, 3) == -1);
  CHECK(kronecker(-8, 5) == -1);
  CHECK(kronecker(3, 0) == 0);
  CHECK(kronecker(1, 0) == 1);
}

TEST_CASE("kronecker matches squares mod p and reciprocity") {
  for (i64 p : primes_up_to(997)) {
    if (p == 2) continue;
    for (i64 a = -30; a <= 30; ++a) CHECK(kronecker(a, p) == oracle::legendre_by_squares(a, p));
  }
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<i64> u(1, 500'000);
  for (int i = 0; i < 5000; ++i) {
    i64 m = 2 * u(rng) + 1, n = 2 * u(rng) + 1;
    if (std::gcd(m, n) != 1) continue;
    int sign = ((m - 1) / 2 % 2 == 1 && (n - 1) / 2 % 2 == 1) ? -1 : 1;
    CHECK(kronecker(m, n) * kronecker(n, m) == sign);
  }
}

TEST_CASE("small multiplicative functions") {
  CHECK(core_square_part(12) == 2);
  CHECK(omega1(factor(18)) == 1);
  CHECK(omega(factor(18)) == 2);
  // (-5|3) = (1|3) = 1 and (-11|3) = (1|3) = 1 by squares mod 3.
  CHECK(oracle::legendre_by_squares(-5, 3) == 1);
  CHECK(omega2(-5, factor(9)) == 1);
  CHECK(omega2(-11, factor(9)) == 1);
  CHECK(omega2(-7, factor(9)) == 0);
  CHECK(mobius(factor(30)) == -1);
  CHECK(mobius(factor(12)) == 0);
  CHECK(sigma(6) == 12);
  CHECK(sigma0(factor(12)) == 6);
  CHECK(v_p(96, 2) == 5);
}

TEST_CASE("dirichlet convolution") {
  auto mm = dirichlet_convolve(mfn::mu(), mfn::mu());
  CHECK(mm.at(3, 1) == Rational(-2));
  CHECK(mm.at(3, 2) == Rational(1));
  CHECK(mm.at(3, 3) == Rational(0));
  CHECK(dirichlet_convolve(mfn::one(), mfn::one()).at(5, 2) == Rational(3));
  auto ms = dirichlet_convolve(mfn::mu(), mfn::sigma0());
  for (int m = 0; m <= 4; ++m) CHECK(ms.at(7, m) == Rational(1));
  for (i64 d = 1; d <= 500; ++d) CHECK(Rational(mu_mu(factor(d))) == mfn::mu_mu()(d));
}

TEST_CASE("mobius squared transform") {
  auto one = [](const FactoredInt &) { return Rational(1); };
  CHECK(mobius_squared_transform(one, factor(7)) == Rational(-1));
  CHECK(mobius_squared_transform(one, factor(1)) == Rational(1));
  auto s0 = [](const FactoredInt &n) { return Rational(sigma0(n)); };
  CHECK(mobius_squared_transform(s0, factor(49)) == Rational(0));
}

TEST_CASE("mobius squared transform inverts sigma0*f") {
  std::vector<MultiplicativeFn> fs{mfn::mu(), mfn::sigma0(), mfn::id()};
  for (auto &f : fs) {
    auto g = dirichlet_convolve(mfn::sigma0(), f);
    auto lifted = [&](const FactoredInt &n) { return g(n); };
    for (i64 M = 1; M <= 10'000; ++M) {
      FactoredInt F = factor(M);
      REQUIRE(mobius_squared_transform(lifted, F) == f(F));
    }
  }
}

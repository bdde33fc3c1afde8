#include <doctest.h>

#include "alsigns/arith.hpp"
#include "alsigns/classnum.hpp"

#include <filesystem>
#include <fstream>

using namespace alsigns;

namespace {

// Multiplicative factors relating class numbers of orders to the maximal order.
Rational gamma_ref(i64 d0, i64 lambda) {
  Rational r(1);
  for (auto [p, m] : factor(lambda).factors) r = r * Rational(ipow(p, m - 1) * (p - kronecker(d0, p)));
  return r;
}

Rational eta_ref(i64 d0, i64 lambda) {
  Rational r(1);
  for (auto [p, m] : factor(lambda).factors) r = r * Rational(sigma(ipow(p, m)) - kronecker(d0, p) * sigma(ipow(p, m - 1)));
  return r;
}

} // namespace

TEST_CASE("h_prime") {
  CHECK(h_prime(-3) == Rational(1, 3));
  CHECK(h_prime(-4) == Rational(1, 2));
  CHECK(h_prime(-36) == Rational(2));
  CHECK(h_prime(-23) == Rational(3));
  CHECK_THROWS_AS(h_prime(0), std::invalid_argument);
  CHECK_THROWS_AS(h_prime(5), std::invalid_argument);
  CHECK_THROWS_AS(h_prime(-6), std::invalid_argument);
}

TEST_CASE("hurwitz") {
  CHECK(hurwitz(0) == Rational(-1, 12));
  CHECK(hurwitz(-7) == Rational(1));
  CHECK(hurwitz(-20) == Rational(2));
  CHECK(hurwitz(-427) == Rational(2));
  CHECK(hurwitz(-44) == Rational(4));
  CHECK(hurwitz(-88) == Rational(2));
  CHECK_THROWS_AS(hurwitz(-5), std::invalid_argument);
  // The discriminants with H = 1 below 200.
  std::vector<i64> ones;
  for (i64 d = -3; d >= -200; --d)
    if (is_discriminant(d) && hurwitz(d) == Rational(1)) ones.push_back(d);
  CHECK(ones == std::vector<i64>{-7, -8, -11, -19, -43, -67, -163});
}

TEST_CASE("hurwitz_t") {
  CHECK(hurwitz_t(5, 0) == Rational(-5, 12));
  CHECK(Rational(1, 2) * Rational(-2 * (4 - 1)) * hurwitz_t(5, 0) == Rational((4 - 1) * 5, 12));
  for (i64 d = 0; d >= -3000; --d)
    if (is_discriminant(d)) REQUIRE(hurwitz_t(1, d) == hurwitz(d));
  // t odd and coprime to -4 q^r ell, and t = 2 mod 4.
  for (i64 n : {7, 11, 15, 35, 39}) {
    for (i64 t : {3, 5, 9, 13, 25}) {
      if (std::gcd(t, n) != 1) continue;
      CHECK(hurwitz_t(t, -4 * n) == Rational(kronecker(-n, t)) * hurwitz(-4 * n));
    }
    for (i64 t : {2, 6, 10, 18}) {
      if (std::gcd(t / 2, n) != 1) continue;
      CHECK(hurwitz_t(t, -4 * n) == Rational(2 * kronecker(-n, t / 2)) * hurwitz(-n));
    }
  }
}

TEST_CASE("oracle") {
  CHECK(hurwitz_oracle(-3) == Rational(1, 3));
  CHECK(hurwitz_oracle(-4) == Rational(1, 2));
  CHECK(hurwitz_oracle(-23) == Rational(3));
  CHECK_THROWS(hurwitz_oracle(0));
  CHECK_THROWS(hurwitz_oracle(-100, 50));
  for (i64 d = -3; d >= -20000; --d)
    if (is_discriminant(d)) REQUIRE(hurwitz(d) == hurwitz_oracle(d));
}

TEST_CASE("eta and gamma factors") {
  for (i64 d0 = -3; d0 >= -200; --d0) {
    if (!is_fundamental(d0)) continue;
    for (i64 lambda = 1; lambda <= 30; ++lambda) {
      i64 d = lambda * lambda * d0;
      CHECK(hurwitz(d) == eta_ref(d0, lambda) * h_prime(d0));
      CHECK(h_prime(d) == gamma_ref(d0, lambda) * h_prime(d0));
    }
  }
}

TEST_CASE("H(-4 q^r) against H(-q^r)") {
  for (i64 q : primes_up_to(2000)) {
    if (q == 2) continue;
    for (i64 qr = q; qr <= 2000; qr *= q) {
      if (((-qr) % 4 + 4) % 4 != 1) continue;
      CHECK(hurwitz(-4 * qr) == Rational(3 - kronecker(-qr, 2)) * hurwitz(-qr));
    }
  }
}

TEST_CASE("sieve") {
  auto t8 = hurwitz_sieve(8);
  CHECK(t8.at(3) == Rational(1, 3));
  CHECK(t8.at(4) == Rational(1, 2));
  CHECK(t8.at(7) == Rational(1));
  CHECK(t8.at(8) == Rational(1));
  CHECK(t8.at(5) == Rational(0));
  auto t4 = hurwitz_sieve(4);
  CHECK(t4.bound() == 4);
  CHECK(t4.at(3) == Rational(1, 3));
  CHECK_THROWS(hurwitz_sieve(3));

  auto big = hurwitz_sieve(50'000);
  CHECK(big.at(427) == Rational(2));
  for (i64 n = 1; n <= 50'000; ++n) REQUIRE(big.at(n) == hurwitz_or_zero(-n));
  CHECK(hurwitz_sieve(50'000, 3).raw() == big.raw());
}

TEST_CASE("sieve cache file") {
  auto dir = std::filesystem::temp_directory_path() / "alsigns-test-cache";
  std::filesystem::create_directories(dir);
  auto path = (dir / "h.bin").string();
  auto t = hurwitz_sieve(10'000);
  t.save(path);
  auto back = HurwitzTable::load(path);
  CHECK(back.bound() == t.bound());
  CHECK(back.raw() == t.raw());
  CHECK(back.checksum() == t.checksum());
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(-3, std::ios::end);
    f.put('\x7f');
  }
  CHECK_THROWS_AS(HurwitzTable::load(path), std::runtime_error);
  CHECK_THROWS_AS(HurwitzTable::load((dir / "missing.bin").string()), std::runtime_error);
  std::filesystem::remove_all(dir);
}

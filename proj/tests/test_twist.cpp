#include <doctest.h>

#include "alsigns/arith.hpp"
#include "alsigns/signs.hpp"
#include "alsigns/trace.hpp"
#include "alsigns/twist.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace alsigns;
using T = LocalRepType;

namespace {

bool has(const std::vector<T> &v, T t) { return std::find(v.begin(), v.end(), t) != v.end(); }

std::vector<TwistCharacter> characters_away(i64 q) {
  std::vector<TwistCharacter> out;
  for (i64 p : {3, 5, 7, 11, 13})
    if (p != q) out.push_back(TwistCharacter::odd(p));
  if (q != 2)
    for (auto c : {TwistCharacter::chi_minus_one(), TwistCharacter::chi_two(), TwistCharacter::chi_minus_two()})
      out.push_back(c);
  return out;
}

} // namespace

TEST_CASE("local types") {
  CHECK(classify_local_types(5, 2) ==
        std::vector<T>{T::ramified_principal_series, T::ramified_twist_of_steinberg, T::unramified_supercuspidal});
  CHECK(has(classify_local_types(2, 3), T::exceptional_supercuspidal));
  CHECK(has(classify_local_types(2, 7), T::exceptional_supercuspidal));
  CHECK_FALSE(has(classify_local_types(3, 3), T::exceptional_supercuspidal));
  CHECK_FALSE(has(classify_local_types(2, 5), T::exceptional_supercuspidal));
  CHECK(classify_local_types(7, 1) == std::vector<T>{T::unramified_twist_of_steinberg});
}

TEST_CASE("characters") {
  auto c5 = TwistCharacter::odd(5);
  CHECK(c5.conductor() == 5);
  CHECK(TwistCharacter::odd(3).conductor() == 3);
  CHECK(TwistCharacter::chi_minus_one().conductor() == 4);
  CHECK(TwistCharacter::chi_two().conductor() == 8);
  CHECK(TwistCharacter::chi_minus_two().conductor() == 8);
  for (i64 p : {3, 5, 7, 11, 13}) {
    auto c = TwistCharacter::odd(p);
    i64 pstar = p % 4 == 1 ? p : -p;
    for (i64 n = 1; n <= 60; ++n) {
      CHECK(c(n) == kronecker(pstar, n));
      if (n % p) CHECK(c(n) == oracle::legendre_by_squares(n, p));
    }
  }
  CHECK_THROWS_AS(TwistCharacter::odd(9), std::invalid_argument);
  CHECK_THROWS_AS(TwistCharacter::odd(2), std::invalid_argument);
}

TEST_CASE("kappa away from q") {
  CHECK(kappa_away(3, 1, TwistCharacter::odd(5)) == -1);
  for (i64 q : {3, 7, 11, 19, 23})
    for (int r : {1, 3, 5}) CHECK(kappa_away(q, r, TwistCharacter::chi_minus_one()) == -1);
  for (i64 q : {5, 13, 29, 37})
    for (int r : {1, 3}) {
      CHECK(kappa_away(q, r, TwistCharacter::chi_two()) == -1);
      CHECK(kappa_away(q, r, TwistCharacter::chi_minus_two()) == -1);
    }
  for (i64 q : primes_up_to(100))
    for (int r = 2; r <= 8; r += 2)
      for (auto &c : characters_away(q)) CHECK(kappa_away(q, r, c) == 1);
  CHECK_THROWS_AS(kappa_away(5, 1, TwistCharacter::odd(5)), std::invalid_argument);
  CHECK_THROWS_AS(kappa_away(2, 1, TwistCharacter::chi_minus_one()), std::invalid_argument);
}

TEST_CASE("kappa parity law") {
  std::mt19937_64 rng(20240611);
  auto primes = primes_up_to(500);
  std::uniform_int_distribution<std::size_t> pick(0, primes.size() - 1);
  std::uniform_int_distribution<int> rr(1, 12);
  for (int i = 0; i < 500; ++i) {
    i64 q = primes[pick(rng)];
    int r = rr(rng);
    for (auto &c : characters_away(q)) {
      int k1 = kappa_away(q, 1, c), kr = kappa_away(q, r, c);
      CHECK(kr * kr == 1);
      CHECK(kr == (r % 2 ? k1 : 1));
    }
  }
}

TEST_CASE("kappa at q") {
  CHECK(kappa_at_q(5, 4, T::ramified_principal_series) == 1);
  CHECK(kappa_at_q(7, 4, T::ramified_principal_series) == -1);
  CHECK(kappa_at_q(7, 4, T::unramified_supercuspidal) == 1);
  CHECK(kappa_at_q(13, 4, T::unramified_supercuspidal) == -1);
  CHECK(kappa_at_q(7, 3, T::ramified_supercuspidal, RamifiedBranch::sqrt_q_star) == 1);
  CHECK(kappa_at_q(7, 3, T::ramified_supercuspidal, RamifiedBranch::sqrt_minus_q_star) == -1);
  CHECK_THROWS_AS(kappa_at_q(7, 3, T::ramified_supercuspidal), std::invalid_argument);
  CHECK_THROWS_AS(kappa_at_q(7, 3, T::ramified_principal_series), std::invalid_argument);
  CHECK_THROWS_AS(kappa_at_q(5, 3, T::ramified_principal_series), std::invalid_argument);
  CHECK_THROWS_AS(kappa_at_q(7, 2, T::unramified_supercuspidal), std::invalid_argument);
  CHECK_THROWS_AS(kappa_at_q(2, 4, T::unramified_supercuspidal), std::invalid_argument);
}

TEST_CASE("twisting by chi_q never flips every type") {
  for (i64 q : primes_up_to(200)) {
    if (q == 2) continue;
    for (int r = 3; r <= 10; ++r) {
      bool all = true;
      for (auto t : classify_local_types(q, r)) {
        if (t == T::ramified_supercuspidal) {
          all = all && kappa_at_q(q, r, t, RamifiedBranch::sqrt_q_star) == -1 &&
                kappa_at_q(q, r, t, RamifiedBranch::sqrt_minus_q_star) == -1;
        } else {
          all = all && kappa_at_q(q, r, t) == -1;
        }
      }
      CHECK(twist_at_q_flips_every_type(q, r) == all);
      CHECK_FALSE(twist_at_q_flips_every_type(q, r));
    }
  }
}

TEST_CASE("quadratic twist bijection") {
  auto chi = quadtwist_bijection(2, 5, 1, factor(27));
  REQUIRE(chi);
  CHECK(*chi == TwistCharacter::odd(3));
  CHECK(delta(2, 5, 1, 27).value == 0);
  chi = quadtwist_bijection(2, 7, 1, factor(32));
  REQUIRE(chi);
  CHECK(*chi == TwistCharacter::chi_minus_one());
  CHECK_FALSE(quadtwist_bijection(2, 7, 1, factor(16)));
  chi = quadtwist_bijection(4, 13, 3, factor(128));
  REQUIRE(chi);
  CHECK(*chi == TwistCharacter::chi_two());
  CHECK_FALSE(quadtwist_bijection(2, 7, 1, factor(27)));
  CHECK_THROWS_AS(quadtwist_bijection(2, 7, 2, factor(27)), std::invalid_argument);
  CHECK_THROWS_AS(quadtwist_bijection(2, 7, 1, factor(14)), std::invalid_argument);
}

TEST_CASE("twisted spaces have vanishing traces") {
  std::mt19937_64 rng(20240611);
  auto odd_primes = primes_up_to(300);
  odd_primes.erase(odd_primes.begin());
  std::uniform_int_distribution<std::size_t> pick(0, odd_primes.size() - 1);
  std::uniform_int_distribution<int> kk(1, 4);
  int cases = 0;
  for (int i = 0; i < 400 && cases < 60; ++i) {
    i64 q = odd_primes[pick(rng)];
    int k = 2 * kk(rng);
    for (i64 M : {27, 125, 32, 128, 343 * 2}) {
      if (M % q == 0) continue;
      auto chi = quadtwist_bijection(k, q, 1, factor(M));
      if (!chi) continue;
      ++cases;
      CHECK(delta(k, q, 1, M).value == 0);
      for (i64 ell = 1; ell <= 50; ++ell) {
        if (std::gcd(ell, q * M) != 1 || (*chi)(ell) != 1) continue;
        INFO("k=" << k << " q=" << q << " M=" << M << " ell=" << ell);
        CHECK(t_new_int(1, M, TraceQuery{k, q, ell}) == 0);
      }
    }
  }
  CHECK(cases >= 60);
}

#pragma once

#include "alsigns/rational.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace alsigns {

struct FactoredInt {
  i64 value = 1;
  std::vector<std::pair<i64, int>> factors; // (prime, exponent), primes increasing

  // Rebuilds a FactoredInt from a factor list; checks the invariants.
  static FactoredInt from_factors(std::vector<std::pair<i64, int>> f);

  int exponent_of(i64 p) const noexcept;
  bool operator==(const FactoredInt &o) const = default;
};

// Smallest-prime-factor sieve bound used by factor(). Values above it fall
// back to trial division. Changing the bound after the first factor() call
// has no effect.
void set_sieve_bound(i64 bound);
i64 sieve_bound();

FactoredInt factor(i64 n);
FactoredInt multiply(const FactoredInt &a, const FactoredInt &b);
std::vector<i64> divisors(const FactoredInt &n);
std::vector<FactoredInt> factored_divisors(const FactoredInt &n);

bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 n);
i64 isqrt(i64 n);

// General Kronecker symbol (a|n).
int kronecker(i64 a, i64 n);

int mobius(const FactoredInt &n);
i64 sigma(const FactoredInt &n);
i64 sigma(i64 n);
i64 sigma0(const FactoredInt &n);
int omega(const FactoredInt &n);
int omega1(const FactoredInt &n); // primes p with p || n
// Number of p with p^2 || M and (n_arg|p) = 1.
int omega2(i64 n_arg, const FactoredInt &M);
int v_p(i64 n, i64 p);
// Greatest Q with Q^2 | n.
i64 core_square_part(i64 n);
bool is_squarefree(const FactoredInt &n);
bool is_cubefree(const FactoredInt &n);
bool is_square(const FactoredInt &n);

// Multiplicative function given by its values on prime powers p^e, e >= 1.
class MultiplicativeFn {
public:
  using Rule = std::function<Rational(i64 p, int e)>;

  MultiplicativeFn() = default;
  explicit MultiplicativeFn(Rule r) : rule_(std::move(r)) {}

  Rational at(i64 p, int e) const { return e == 0 ? Rational(1) : rule_(p, e); }
  Rational operator()(const FactoredInt &n) const;
  Rational operator()(i64 n) const { return (*this)(factor(n)); }

private:
  Rule rule_;
};

MultiplicativeFn dirichlet_convolve(const MultiplicativeFn &f, const MultiplicativeFn &g);

namespace mfn {
MultiplicativeFn one();
MultiplicativeFn mu();
MultiplicativeFn abs_mu();
MultiplicativeFn id();
MultiplicativeFn sigma0();
MultiplicativeFn mu_mu(); // the Dirichlet inverse of sigma0
} // namespace mfn

// (mu*mu)(d) on a factored divisor.
int mu_mu(const FactoredInt &d);

// Sum over d | M of (mu*mu)(d) f(M/d).
Rational mobius_squared_transform(const std::function<Rational(const FactoredInt &)> &f,
                                  const FactoredInt &M);

} // namespace alsigns

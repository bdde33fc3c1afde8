#pragma once

// Independent reference computations used only by the tests.

#include "alsigns/rational.hpp"

#include <map>
#include <numeric>
#include <vector>

namespace oracle {

using alsigns::i64;

// Coefficients a_1..a_len of prod_d eta(d z)^{e_d}, assuming the product has
// integral q-order sum(d e_d)/24.
inline std::vector<i64> eta_product(const std::map<int, int> &exps, int len) {
  int shift24 = 0;
  for (auto [d, e] : exps) shift24 += d * e;
  int shift = shift24 / 24;
  std::vector<i64> c(len + 1, 0);
  c[0] = 1;
  for (auto [d, e] : exps)
    for (int rep = 0; rep < e; ++rep)
      for (int n = 1; d * n <= len; ++n)
        for (int i = len; i >= d * n; --i) c[i] -= c[i - d * n];
  std::vector<i64> a(len + 1, 0);
  for (int n = shift; n <= len; ++n) a[n] = c[n - shift];
  return a;
}

inline int legendre_by_squares(i64 a, i64 p) {
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  for (i64 x = 1; x < p; ++x)
    if (x * x % p == a) return 1;
  return -1;
}

// dim S_k(Gamma_0(N)) from the Riemann-Roch formula with elliptic points and
// cusps counted by brute force.
inline i64 cusp_form_dim(int k, i64 N) {
  i64 nu2 = 0, nu3 = 0, cusps = 0;
  if (N % 4 != 0)
    for (i64 x = 0; x < N; ++x) nu2 += (x * x + 1) % N == 0;
  if (N % 9 != 0)
    for (i64 x = 0; x < N; ++x) nu3 += (x * x + x + 1) % N == 0;
  for (i64 d = 1; d <= N; ++d) {
    if (N % d) continue;
    i64 g = std::gcd(d, N / d), phi = 0;
    for (i64 j = 1; j <= g; ++j) phi += std::gcd(j, g) == 1;
    cusps += phi;
  }
  alsigns::Rational mu(N);
  i64 m = N;
  for (i64 p = 2; p <= m; ++p)
    if (m % p == 0) {
      mu = mu * alsigns::Rational(p + 1, p);
      while (m % p == 0) m /= p;
    }
  alsigns::Rational dim = alsigns::Rational(k - 1, 12) * mu + (alsigns::Rational(k / 4) - alsigns::Rational(k - 1, 4)) * nu2 +
                          (alsigns::Rational(k / 3) - alsigns::Rational(k - 1, 3)) * nu3 - alsigns::Rational(cusps, 2);
  if (k == 2) dim = dim + 1;
  return dim.to_integer();
}

} // namespace oracle

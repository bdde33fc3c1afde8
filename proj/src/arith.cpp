#include "alsigns/arith.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace alsigns {

namespace {

std::atomic<i64> g_sieve_bound{10'000'000};
std::once_flag g_sieve_once;
std::vector<std::uint32_t> g_spf;

const std::vector<std::uint32_t> &spf_table() {
  std::call_once(g_sieve_once, [] {
    i64 b = g_sieve_bound.load();
    g_spf.assign(static_cast<std::size_t>(b + 1), 0);
    for (i64 i = 2; i <= b; ++i) {
      if (g_spf[i] != 0) continue;
      g_spf[i] = static_cast<std::uint32_t>(i);
      if (i > b / i) continue;
      for (i64 j = i * i; j <= b; j += i)
        if (g_spf[j] == 0) g_spf[j] = static_cast<std::uint32_t>(i);
    }
  });
  return g_spf;
}

void push_factor(std::vector<std::pair<i64, int>> &f, i64 p) {
  if (!f.empty() && f.back().first == p)
    ++f.back().second;
  else
    f.emplace_back(p, 1);
}

} // namespace

void set_sieve_bound(i64 bound) {
  if (bound < 4) throw std::invalid_argument("sieve bound must be at least 4");
  g_sieve_bound.store(bound);
}

i64 sieve_bound() { return g_sieve_bound.load(); }

FactoredInt FactoredInt::from_factors(std::vector<std::pair<i64, int>> f) {
  FactoredInt r;
  i64 prev = 1;
  for (auto [p, e] : f) {
    if (p <= prev || e < 1) throw std::invalid_argument("bad factor list");
    prev = p;
    r.value = checked_mul(r.value, ipow(p, e));
  }
  r.factors = std::move(f);
  return r;
}

int FactoredInt::exponent_of(i64 p) const noexcept {
  for (auto [q, e] : factors)
    if (q == p) return e;
  return 0;
}

FactoredInt factor(i64 n) {
  if (n < 1) throw std::invalid_argument("factor: n must be positive, got " + std::to_string(n));
  FactoredInt r;
  r.value = n;
  if (n <= sieve_bound()) {
    const auto &spf = spf_table();
    while (n > 1) {
      i64 p = spf[n];
      push_factor(r.factors, p);
      n /= p;
    }
    return r;
  }
  for (i64 p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      push_factor(r.factors, p);
      n /= p;
    }
  }
  if (n > 1) push_factor(r.factors, n);
  return r;
}

FactoredInt multiply(const FactoredInt &a, const FactoredInt &b) {
  std::vector<std::pair<i64, int>> f;
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
      f.push_back(a.factors[i++]);
    } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
      f.push_back(b.factors[j++]);
    } else {
      f.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
      ++i;
      ++j;
    }
  }
  FactoredInt r;
  r.value = checked_mul(a.value, b.value);
  r.factors = std::move(f);
  return r;
}

std::vector<FactoredInt> factored_divisors(const FactoredInt &n) {
  std::vector<FactoredInt> out{FactoredInt{}};
  for (auto [p, e] : n.factors) {
    std::size_t base = out.size();
    for (std::size_t i = 0; i < base; ++i) {
      FactoredInt d = out[i];
      d.factors.emplace_back(p, 0);
      for (int k = 1; k <= e; ++k) {
        d.value *= p;
        d.factors.back().second = k;
        out.push_back(d);
      }
    }
  }
  return out;
}

std::vector<i64> divisors(const FactoredInt &n) {
  std::vector<i64> out{1};
  for (auto [p, e] : n.factors) {
    std::size_t base = out.size();
    for (std::size_t i = 0; i < base; ++i) {
      i64 d = out[i];
      for (int k = 1; k <= e; ++k) {
        d *= p;
        out.push_back(d);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

i64 isqrt(i64 n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  if (n <= sieve_bound()) return spf_table()[n] == n;
  for (i64 p = 2; p <= n / p; ++p)
    if (n % p == 0) return false;
  return true;
}

std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<bool> comp(static_cast<std::size_t>(n + 1), false);
  for (i64 i = 2; i <= n; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    if (i > n / i) continue;
    for (i64 j = i * i; j <= n; j += i) comp[j] = true;
  }
  return out;
}

int kronecker(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int v = 0;
  while ((n & 1) == 0) {
    n >>= 1;
    ++v;
  }
  if (v > 0) {
    if ((a & 1) == 0) return 0;
    i64 r8 = ((a % 8) + 8) % 8;
    if ((v & 1) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi symbol (a|n), n odd positive.
  i64 m = n;
  i64 x = a % m;
  if (x < 0) x += m;
  while (x != 0) {
    while ((x & 1) == 0) {
      x >>= 1;
      i64 r = m % 8;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(x, m);
    if (x % 4 == 3 && m % 4 == 3) result = -result;
    x %= m;
  }
  return m == 1 ? result : 0;
}

int mobius(const FactoredInt &n) {
  int r = 1;
  for (auto [p, e] : n.factors) {
    if (e > 1) return 0;
    r = -r;
  }
  return r;
}

i64 sigma(const FactoredInt &n) {
  i64 r = 1;
  for (auto [p, e] : n.factors) {
    i64 s = 1, pk = 1;
    for (int i = 0; i < e; ++i) {
      pk = checked_mul(pk, p);
      s = checked_add(s, pk);
    }
    r = checked_mul(r, s);
  }
  return r;
}

i64 sigma(i64 n) { return sigma(factor(n)); }

i64 sigma0(const FactoredInt &n) {
  i64 r = 1;
  for (auto [p, e] : n.factors) r *= (e + 1);
  return r;
}

int omega(const FactoredInt &n) { return static_cast<int>(n.factors.size()); }

int omega1(const FactoredInt &n) {
  int c = 0;
  for (auto [p, e] : n.factors) c += (e == 1);
  return c;
}

int omega2(i64 n_arg, const FactoredInt &M) {
  int c = 0;
  for (auto [p, e] : M.factors)
    if (e == 2 && kronecker(n_arg, p) == 1) ++c;
  return c;
}

int v_p(i64 n, i64 p) {
  if (n == 0) throw std::domain_error("v_p(0) is infinite");
  if (p < 2) throw std::invalid_argument("v_p: p must be at least 2");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

i64 core_square_part(i64 n) {
  if (n == 0) throw std::domain_error("Q(0) is undefined");
  if (n < 0) n = -n;
  i64 r = 1;
  for (auto [p, e] : factor(n).factors) r *= ipow(p, e / 2);
  return r;
}

bool is_squarefree(const FactoredInt &n) {
  return std::all_of(n.factors.begin(), n.factors.end(), [](auto pe) { return pe.second == 1; });
}

bool is_cubefree(const FactoredInt &n) {
  return std::all_of(n.factors.begin(), n.factors.end(), [](auto pe) { return pe.second <= 2; });
}

bool is_square(const FactoredInt &n) {
  return std::all_of(n.factors.begin(), n.factors.end(), [](auto pe) { return pe.second % 2 == 0; });
}

Rational MultiplicativeFn::operator()(const FactoredInt &n) const {
  Rational r(1);
  for (auto [p, e] : n.factors) {
    r *= rule_(p, e);
    if (r.is_zero()) break;
  }
  return r;
}

MultiplicativeFn dirichlet_convolve(const MultiplicativeFn &f, const MultiplicativeFn &g) {
  return MultiplicativeFn([f, g](i64 p, int m) {
    Rational s(0);
    for (int j = 0; j <= m; ++j) s += f.at(p, j) * g.at(p, m - j);
    return s;
  });
}

namespace mfn {
MultiplicativeFn one() {
  return MultiplicativeFn([](i64, int) { return Rational(1); });
}
MultiplicativeFn mu() {
  return MultiplicativeFn([](i64, int e) { return Rational(e == 1 ? -1 : 0); });
}
MultiplicativeFn abs_mu() {
  return MultiplicativeFn([](i64, int e) { return Rational(e == 1 ? 1 : 0); });
}
MultiplicativeFn id() {
  return MultiplicativeFn([](i64 p, int e) { return Rational(ipow(p, e)); });
}
MultiplicativeFn sigma0() {
  return MultiplicativeFn([](i64, int e) { return Rational(e + 1); });
}
MultiplicativeFn mu_mu() {
  return MultiplicativeFn([](i64, int e) { return Rational(e == 1 ? -2 : e == 2 ? 1 : 0); });
}
} // namespace mfn

int mu_mu(const FactoredInt &d) {
  int r = 1;
  for (auto [p, e] : d.factors) {
    if (e == 1)
      r *= -2;
    else if (e > 2)
      return 0;
  }
  return r;
}

Rational mobius_squared_transform(const std::function<Rational(const FactoredInt &)> &f,
                                  const FactoredInt &M) {
  // Only divisors d with every exponent at most 2 carry weight, so enumerate
  // M/d directly by lowering each exponent by 0, 1 or 2.
  Rational total(0);
  std::vector<std::pair<i64, int>> cof;
  std::function<void(std::size_t, int, i64)> rec = [&](std::size_t i, int weight, i64 value) {
    if (i == M.factors.size()) {
      FactoredInt c;
      c.value = value;
      for (auto pe : cof)
        if (pe.second > 0) c.factors.push_back(pe);
      total += Rational(weight) * f(c);
      return;
    }
    auto [p, e] = M.factors[i];
    static constexpr int w[3] = {1, -2, 1};
    for (int j = 0; j <= std::min(e, 2); ++j) {
      cof.emplace_back(p, e - j);
      rec(i + 1, weight * w[j], value * ipow(p, e - j));
      cof.pop_back();
    }
  };
  rec(0, 1, 1);
  return total;
}

} // namespace alsigns

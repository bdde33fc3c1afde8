#include "alsigns/trace.hpp"

#include "alsigns/classnum.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace alsigns {

namespace {

bool coprime(i64 a, i64 b) { return std::gcd(a, b) == 1; }

void check_weight(int k) {
  if (k < 2 || (k & 1)) throw std::invalid_argument("weight must be even and at least 2, got " + std::to_string(k));
}

// Divisors t | M with M/t squarefree, i.e. t = prod p^{e or e-1}.
template <class Fn> void for_each_sqf_cofactor(const FactoredInt &M, Fn &&fn) {
  std::vector<i64> ts{1};
  for (auto [p, e] : M.factors) {
    i64 hi = ipow(p, e), lo = hi / p;
    std::vector<i64> next;
    next.reserve(ts.size() * 2);
    for (i64 t : ts) {
      next.push_back(t * hi);
      next.push_back(t * lo);
    }
    ts.swap(next);
  }
  for (i64 t : ts) fn(t);
}

i64 phi_prime_power(i64 p, int e) { return e == 0 ? 1 : ipow(p, e - 1) * (p - 1); }

} // namespace

void TraceQuery::validate(const FactoredInt &M) const {
  check_weight(k);
  if (!is_prime(q)) throw std::invalid_argument("q must be prime, got " + std::to_string(q));
  if (ell < 1) throw std::invalid_argument("ell must be positive");
  if (!coprime(q, M.value) || !coprime(q, ell) || !coprime(ell, M.value))
    throw std::invalid_argument("q, ell and M must be pairwise coprime");
}

void SquarefreeTraceQuery::validate() const {
  check_weight(k);
  if (Q < 1 || M < 1 || ell < 1) throw std::invalid_argument("Q, M and ell must be positive");
  if (!coprime(Q, M) || !coprime(Q, ell) || !coprime(M, ell))
    throw std::invalid_argument("Q, M and ell must be pairwise coprime");
  if (!is_squarefree(factor(checked_mul(Q, M)))) throw std::invalid_argument("QM must be squarefree");
  if (Q == 1 && ell != 1 && !is_prime(ell))
    throw std::invalid_argument("Q = 1 needs ell prime (or ell = 1)");
}

i64 p_k_int(i64 S, i64 ell, int k) {
  check_weight(k);
  // P_0 = 0, P_1 = 1, P_{n+1} = s P_n - ell P_{n-1}. Odd-index terms are
  // integers a_n; even-index terms are s * b_n with b_n an integer.
  i64 a = 1, b = 0;
  for (int n = 1; n < k - 1; n += 2) {
    b = checked_add(a, -checked_mul(ell, b));
    a = checked_add(checked_mul(S, b), -checked_mul(ell, a));
  }
  return a;
}

Rational p_k(i64 S, i64 ell, int k) { return Rational(p_k_int(S, ell, k)); }

i64 p_k_special(int s_squared, int k) {
  check_weight(k);
  switch (s_squared) {
  case 0:
    return (k / 2 - 1) % 2 == 0 ? 1 : -1;
  case 1:
    return k % 6 == 0 ? -1 : (k % 6 == 2 ? 1 : 0);
  case 2:
    return (k % 8 == 0 || k % 8 == 6) ? -1 : 1;
  case 3:
    switch (k % 12) {
    case 0:
    case 8:
      return -1;
    case 2:
    case 6:
      return 1;
    case 4:
      return 2;
    default:
      return -2;
    }
  case 4:
    return k - 1;
  default:
    throw std::invalid_argument("p_k_special: s^2 must be 0..4");
  }
}

Rational alpha1(i64 n, int e) {
  if (n <= 0) throw std::invalid_argument("alpha1 needs n > 0");
  if (e < 0) throw std::invalid_argument("alpha1 needs e >= 0");
  Rational h4 = hurwitz_fast(-4 * n);
  if (e == 0) return h4;
  if (e >= 5) return Rational(0);
  Rational h1 = hurwitz_fast(-n);
  int chi2 = kronecker(-n, 2);
  switch (e) {
  case 1:
  case 2:
    return Rational(2) * h1 - h4;
  case 3:
    return Rational(4 * chi2 - 6) * h1 + h4;
  default:
    return Rational(2 - 4 * chi2) * h1;
  }
}

Rational A1(int eps, int r, const FactoredInt &M, const TraceQuery &query) {
  if (r < 0) return Rational(0);
  const i64 qr = ipow(query.q, r);
  const i64 bound = checked_mul(4 * qr, query.ell); // s^2 <= 4 q^r ell
  const i64 step = checked_mul(qr, eps ? query.q : 1);
  const i64 step_sq_over_qr = checked_mul(qr, eps ? query.q * query.q : 1); // step^2 / q^r
  Rational total(0);
  const i64 smax = isqrt(bound);
  for (i64 j = 0; j * step <= smax; ++j) {
    i64 s = j * step;
    i64 S = checked_mul(j * j, step_sq_over_qr);
    i64 disc = s * s - bound;
    i64 pk = p_k_int(S, query.ell, query.k);
    if (pk == 0) continue;
    Rational inner(0);
    for_each_sqf_cofactor(M, [&](i64 t) { inner += hurwitz_t_fast(t, disc); });
    Rational term = Rational(pk) * inner;
    total += (j == 0) ? term : Rational(2) * term;
  }
  return Rational(-1, 2) * total;
}

Rational A2(int r, const FactoredInt &M, const TraceQuery &query) {
  if (r < 0 || (r & 1)) return Rational(0);
  const i64 half = ipow(query.q, r / 2);
  const i64 ell = query.ell;
  Rational total(0);
  for (i64 d : divisors(factor(ell))) {
    i64 other = ell / d;
    if ((d + other) % half != 0) continue;
    i64 mn = std::min(d, other);
    i64 w = ipow(mn, query.k - 1);
    i64 diff = d - other < 0 ? other - d : d - other;
    i64 inner = 0;
    for_each_sqf_cofactor(M, [&](i64 t) { inner += std::gcd(core_square_part(t), diff); });
    total += Rational(checked_mul(w, inner));
  }
  return Rational(-1, 2) * Rational(phi_prime_power(query.q, r / 2)) * total;
}

Rational A3(const TraceQuery &query) { return query.k == 2 ? Rational(sigma(query.ell)) : Rational(0); }

Rational t_full(int r, const FactoredInt &M, const TraceQuery &query) {
  if (r < 0) return Rational(0);
  Rational t = A1(0, r, M, query);
  if (r >= 2) t -= A1(1, r - 2, M, query);
  return t + A2(r, M, query) + A3(query);
}

Rational t_new(int r, const FactoredInt &M, const TraceQuery &query) {
  query.validate(M);
  if (r < 0) return Rational(0);
  return mobius_squared_transform(
      [&](const FactoredInt &m) { return t_full(r, m, query) - t_full(r - 2, m, query); }, M);
}

Rational xi_prime(i64 delta, i64 p) {
  if (delta > 0) throw std::invalid_argument("xi_prime needs delta <= 0");
  if (delta == 0) return Rational(p - 1); // H_p(0) = p H(0)
  if (delta % (p * p) != 0) return Rational(kronecker(delta, p) - 1);
  int v = v_p(delta, p);
  i64 rest = delta;
  for (int i = 0; i < v; ++i) rest /= p;
  int e = 0;
  int chi0 = 0;
  if (p == 2) {
    i64 r4 = ((rest % 4) + 4) % 4;
    if (v % 2 == 1) {
      e = (v - 3) / 2;
    } else if (r4 == 1) {
      e = v / 2;
      chi0 = kronecker(rest, 2);
    } else {
      e = (v - 2) / 2;
    }
  } else {
    e = v / 2;
    if (v % 2 == 0) chi0 = kronecker(rest, p);
  }
  i64 pe = ipow(p, e);
  Rational num((p - 1) * (chi0 - 1));
  Rational den((pe * p - 1) - chi0 * (pe - 1));
  return num / den;
}

Rational t_new_squarefree(const SquarefreeTraceQuery &query) {
  query.validate();
  const i64 Q = query.Q, ell = query.ell;
  const FactoredInt M = factor(query.M);
  Rational total(0);
  for (i64 s = 0; checked_mul(s * s, Q) <= 4 * ell; ++s) {
    i64 S = s * s * Q;
    i64 delta = checked_mul(Q, S - 4 * ell);
    i64 pk = p_k_int(S, ell, query.k);
    if (pk == 0) continue;
    Rational xi(1);
    for (auto [p, e] : M.factors) xi *= xi_prime(delta, p);
    Rational term = Rational(pk) * xi * hurwitz_fast(delta);
    total += (s == 0) ? term : Rational(2) * term;
  }
  Rational result = Rational(-1, 2) * total;
  if (Q == 1 && query.M == 1) result -= (ell == 1) ? Rational(1, 2) : Rational(1);
  if (query.k == 2) result += Rational(mobius(M) * sigma(ell));
  return result;
}

Rational t_full_fricke(int k, i64 N, i64 n) {
  check_weight(k);
  if (N < 1 || n < 1) throw std::invalid_argument("N and n must be positive");
  if (!is_squarefree(factor(N))) throw std::invalid_argument("N must be squarefree");
  if (std::gcd(n, N) != 1) throw std::invalid_argument("n must be coprime to N");
  if (4 * n >= N) throw std::invalid_argument("need 4n < N; the formula has extra terms otherwise");
  i64 sgn = ((k - 2) / 2) % 2 == 0 ? 1 : -1;
  Rational r = Rational(-1, 2) * Rational(sgn * ipow(n, (k - 2) / 2)) * hurwitz_fast(-4 * n * N);
  if (k == 2) r += Rational(sigma(n));
  return r;
}

} // namespace alsigns

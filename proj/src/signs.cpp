#include "alsigns/signs.hpp"

#include "alsigns/classnum.hpp"
#include "alsigns/trace.hpp"

#include <algorithm>
#include <numeric>
#include <vector>
#include <stdexcept>

namespace alsigns {

namespace {

int weight_sign(int k) { return (k / 2) % 2 == 0 ? 1 : -1; }

struct TwoSplit {
  int e = 0;
  FactoredInt odd; // M'
};

TwoSplit split2(const FactoredInt &M) {
  TwoSplit s;
  s.odd.value = M.value;
  for (auto [p, e] : M.factors) {
    if (p == 2) {
      s.e = e;
      s.odd.value >>= e;
    } else {
      s.odd.factors.emplace_back(p, e);
    }
  }
  return s;
}

FactoredInt two_power(int e) {
  FactoredInt f;
  if (e > 0) f = FactoredInt::from_factors({{2, e}});
  return f;
}

void check_delta_args(int k, i64 q, int r, const FactoredInt &M) {
  if (k < 2 || (k & 1)) throw std::invalid_argument("weight must be even and at least 2");
  if (!is_prime(q)) throw std::invalid_argument("q must be prime");
  if (r < 1) throw std::invalid_argument("r must be at least 1");
  if (std::gcd(q, M.value) != 1) throw std::invalid_argument("q must not divide M");
}

bool has_split_prime(i64 Delta, const FactoredInt &Modd) {
  for (auto [p, e] : Modd.factors)
    if (e == 1 && kronecker(Delta, p) == 1) return true;
  return false;
}

int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

} // namespace

Rational kappa_minus(i64 Delta, const FactoredInt &M) {
  Rational r(1);
  for (auto [p, m] : M.factors) {
    int chi = kronecker(Delta, p);
    bool divides = Delta % p == 0;
    i64 v = 0;
    if (m == 1)
      v = chi - 1;
    else if (m == 2)
      v = divides ? -1 : -chi;
    else if (m == 3 && divides)
      v = 1;
    r *= Rational(v);
    if (r.is_zero()) break;
  }
  return r;
}

Rational kappa_infty(const FactoredInt &M) {
  Rational r(1);
  for (auto [p, m] : M.factors) {
    if (m == 1)
      r *= Rational(p - 1);
    else if (m == 2)
      r *= Rational(p * p - p - 1);
    else
      r *= Rational(checked_mul(ipow(p, m - 3), (p - 1) * (p - 1) * (p + 1)));
  }
  return r;
}

Rational alpha2(const FactoredInt &M) {
  Rational r(1);
  for (auto [p, m] : M.factors) {
    if (m % 2 == 1) return Rational(0);
    if (m == 2)
      r *= Rational(p - 2);
    else
      r *= Rational(checked_mul(ipow(p, (m - 4) / 2), (p - 1) * (p - 1)));
  }
  return r;
}

i64 newspace_dim(int k, const FactoredInt &N) {
  if (k < 2 || (k & 1)) throw std::invalid_argument("weight must be even and at least 2");
  Rational nu2(1), nu3(1);
  for (auto [p, m] : N.factors) {
    i64 v2, v3;
    if (p == 2)
      v2 = m == 1 ? -1 : m == 2 ? -1 : m == 3 ? 1 : 0;
    else if (p % 4 == 1)
      v2 = m == 2 ? -1 : 0;
    else
      v2 = m == 1 ? -2 : m == 2 ? 1 : 0;
    if (p == 3)
      v3 = m == 1 ? -1 : m == 2 ? -1 : m == 3 ? 1 : 0;
    else if (p % 3 == 1)
      v3 = m == 2 ? -1 : 0;
    else
      v3 = m == 1 ? -2 : m == 2 ? 1 : 0;
    nu2 *= Rational(v2);
    nu3 *= Rational(v3);
  }
  Rational c2 = Rational(1, 4) + Rational(k / 4) - Rational(k, 4);
  Rational c3 = Rational(1, 3) + Rational(k / 3) - Rational(k, 3);
  Rational d = Rational(k - 1, 12) * kappa_infty(N) - Rational(1, 2) * alpha2(N) + c2 * nu2 + c3 * nu3;
  if (k == 2) d += Rational(mobius(N));
  return d.to_integer();
}

Rational delta_closed_form(int k, i64 q, int r, const FactoredInt &M) {
  check_delta_args(k, q, r, M);
  const Rational sk(weight_sign(k));
  const Rational half(1, 2);
  const TwoSplit sp = split2(M);
  const int e = sp.e;
  const FactoredInt &Mo = sp.odd;
  const Rational dk2 = k == 2 ? Rational(mobius(M)) : Rational(0);
  const i64 qr = ipow(q, r);

  if (r == 1) {
    if (q >= 5) return half * sk * alpha1(q, e) * kappa_minus(-q, Mo) + dk2;
    if (q == 2)
      return half * (sk * kappa_minus(-2, M) - Rational(p_k_special(2, k)) * kappa_minus(-1, M)) + dk2;
    return half * sk * alpha1(3, e) * kappa_minus(-3, Mo) -
           Rational(1, 3) * Rational(p_k_special(3, k)) * kappa_minus(-3, M) + dk2;
  }
  if (r % 2 == 1) {
    if (qr == 8) return half * (sk * kappa_minus(-2, M) + Rational(p_k_special(2, k)) * kappa_minus(-1, M));
    if (qr == 27)
      return (half * sk * (alpha1(27, e) - Rational(2) * alpha1(3, e)) +
              Rational(1, 3) * Rational(p_k_special(3, k)) * kappa_minus(-3, two_power(e))) *
             kappa_minus(-3, Mo);
    Rational aleph = alpha1(qr, e) - Rational(2) * alpha1(qr / (q * q), e);
    if (r >= 5) aleph += alpha1(qr / ipow(q, 4), e);
    return half * sk * kappa_minus(-q, Mo) * aleph;
  }
  if (r == 2) {
    const Rational kinf = kappa_infty(M);
    Rational a10_0 = Rational(1, 12) * (Rational(3) * sk * kappa_minus(-4, M) -
                                        Rational(4 * p_k_special(1, k)) * kappa_minus(-3, M) +
                                        Rational(k - 1) * kinf);
    Rational a10_2, a11_0, a2_diff;
    if (q == 2) {
      a10_2 = Rational(1, 12) * (Rational(9) * sk * kappa_minus(-1, M) + Rational(k - 1) * kinf);
      a11_0 = Rational(1, 12) * (Rational(3) * sk * kappa_minus(-1, M) + Rational(k - 1) * kinf);
      a2_diff = Rational(0);
    } else {
      a10_2 = half * sk * alpha1(q * q, e) * kappa_minus(-1, Mo);
      a11_0 = half * sk * alpha1(1, e) * kappa_minus(-1, Mo);
      a2_diff = half * alpha2(M);
    }
    return a10_2 - a10_0 - a11_0 + a2_diff;
  }
  if (qr == 16) return half * (sk * kappa_minus(-1, M) + alpha2(M));
  Rational aleph = alpha1(qr, e) - Rational(2) * alpha1(qr / (q * q), e) + alpha1(qr / ipow(q, 4), e);
  return half * sk * kappa_minus(-1, Mo) * aleph;
}

std::string to_string(ZeroReason z) {
  switch (z) {
  case ZeroReason::none:
    return "none";
  case ZeroReason::not_cubefree:
    return "not-cubefree";
  case ZeroReason::split_prime:
    return "split-prime";
  case ZeroReason::two_adic_case:
    return "two-adic-case";
  case ZeroReason::exceptional_small_level:
    return "exceptional-small-level";
  }
  return "none";
}

int b_2e(int e) {
  if (e == 0 || e == 3) return 1;
  if (e == 1 || e == 2) return -1;
  return 0;
}

int b_req(int r, int e, i64 q) {
  if (q == 2) return e == 0 ? 1 : 0;
  if (e >= 5) return 0;
  i64 qr_mod4 = (r % 2 == 0 || q % 4 == 1) ? 1 : 3;
  if (qr_mod4 == 1) {
    static constexpr int t[5] = {1, -1, -1, 1, 0};
    return t[e];
  }
  int chi = kronecker(-q, 2); // -1 for q = 3 mod 8, +1 for q = 7 mod 8
  switch (e) {
  case 0:
    return 1;
  case 1:
  case 2:
  case 3:
    return chi == 1 ? 0 : -1;
  default:
    return chi == 1 ? -1 : 1;
  }
}

PredicateVerdict equidistribution_predicate(int k, i64 q, int r, const FactoredInt &M) {
  check_delta_args(k, q, r, M);
  PredicateVerdict v;
  const TwoSplit sp = split2(M);
  const int e = sp.e;
  const FactoredInt &Mo = sp.odd;
  const i64 qr = ipow(q, r);
  const bool sqf = is_squarefree(M);

  auto odd_exponent_rule = [&](const std::string &tag) {
    v.covered = true;
    v.tag = tag;
    if (!is_cubefree(Mo)) {
      v.zero = true;
      v.reason = ZeroReason::not_cubefree;
    } else if (has_split_prime(-q, Mo)) {
      v.zero = true;
      v.reason = ZeroReason::split_prime;
    } else if (b_req(r, e, q) == 0) {
      v.zero = true;
      v.reason = ZeroReason::two_adic_case;
    } else {
      int n = k / 2 + omega1(Mo) + omega2(-qr, Mo);
      v.sign = parity_sign(n) * b_req(r, e, q);
    }
  };

  if (r % 2 == 1) {
    if (qr == 8 || qr == 27) {
      v.tag = "q^r=" + std::to_string(qr) + " not covered";
      return v;
    }
    if (r >= 3) {
      odd_exponent_rule("odd-exponent");
      return v;
    }
    if (q >= 5) {
      if (k >= 4 || !sqf) {
        odd_exponent_rule("req1(1)");
        return v;
      }
      // k = 2, M squarefree.
      v.covered = true;
      // Delta = 0 exactly when (1/2) alpha_1(-q; e) kappa_{-q}(M') = mu(M); the
      // only solutions have M in {1, 2}.
      if (M.value == 1 || M.value == 2) {
        v.tag = M.value == 1 ? "req1(2)(i)" : "req1(2)(ii)";
        bool zero = M.value == 1 ? hurwitz(-4 * q) == Rational(2)
                                 : hurwitz(-4 * q) == Rational(2) * hurwitz_or_zero(-q) + Rational(2);
        if (zero) {
          v.zero = true;
          v.reason = ZeroReason::exceptional_small_level;
          return v;
        }
      } else {
        v.tag = "req1(2)";
      }
      if (has_split_prime(-q, Mo) || b_req(1, e, q) == 0)
        v.sign = mobius(M);
      else
        v.sign = parity_sign(k / 2 + omega1(Mo) + omega2(-q, Mo)) * b_req(1, e, q);
      return v;
    }
    if (q == 2) {
      v.covered = true;
      v.tag = "req1(3)";
      if (!is_cubefree(M)) {
        v.zero = true;
        v.reason = ZeroReason::not_cubefree;
        return v;
      }
      if (k == 2 && sqf) {
        if (M.value == 1 || (M.factors.size() == 1 && (M.value % 8 == 3 || M.value % 8 == 5))) {
          v.zero = true;
          v.reason = ZeroReason::exceptional_small_level;
        }
        return v;
      }
      // Both kappa_{-2}(M) and kappa_{-1}(M) vanish, or they cancel.
      bool k2_zero = has_split_prime(-2, M);
      bool k1_zero = has_split_prime(-1, M);
      if (k2_zero && k1_zero) {
        v.zero = true;
        v.reason = ZeroReason::split_prime;
        return v;
      }
      if (k2_zero || k1_zero) return v;
      int prod = 1;
      for (auto [p, m] : M.factors)
        if (m == 2) prod *= kronecker(2, p);
      int want = (k % 8 == 0 || k % 8 == 2) ? -1 : 1;
      if (prod == want) {
        v.zero = true;
        v.reason = ZeroReason::two_adic_case;
      }
      return v;
    }
    // q = 3
    v.covered = true;
    v.tag = "req1(4)";
    if (k == 2 && sqf) {
      if (M.value == 1 || M.value == 2) {
        v.zero = true;
        v.reason = ZeroReason::exceptional_small_level;
      }
      return v;
    }
    int km12 = k % 12;
    bool k_4_10 = km12 == 4 || km12 == 10;
    if (!is_cubefree(Mo)) {
      v.zero = true;
      v.reason = ZeroReason::not_cubefree;
    } else if (has_split_prime(-3, Mo)) {
      v.zero = true;
      v.reason = ZeroReason::split_prime;
    } else if (e >= 5 || (e == 0 && k_4_10) || (e == 2 && !k_4_10)) {
      v.zero = true;
      v.reason = ZeroReason::two_adic_case;
    }
    return v;
  }

  if (r == 2) {
    v.tag = "r=2 not covered";
    return v;
  }
  if (qr == 16) {
    v.tag = "q^r=16 not covered";
    return v;
  }
  v.covered = true;
  v.tag = "even-exponent";
  if (!is_cubefree(Mo)) {
    v.zero = true;
    v.reason = ZeroReason::not_cubefree;
  } else if (e >= 4) {
    v.zero = true;
    v.reason = ZeroReason::two_adic_case;
  } else if (has_split_prime(-1, Mo)) {
    v.zero = true;
    v.reason = ZeroReason::split_prime;
  } else {
    v.sign = parity_sign(k / 2 + omega1(Mo) + omega2(-1, Mo)) * b_2e(e);
  }
  return v;
}

DeltaResult delta(int k, i64 q, int r, const FactoredInt &M) {
  DeltaResult d;
  d.value = delta_closed_form(k, q, r, M).to_integer();
  d.verdict = equidistribution_predicate(k, q, r, M);
  return d;
}

EigenspaceDims eigenspace_dims(int k, i64 q, int r, const FactoredInt &M) {
  i64 dl = delta_closed_form(k, q, r, M).to_integer();
  FactoredInt N = multiply(M, FactoredInt::from_factors({{q, r}}));
  i64 dim = newspace_dim(k, N);
  if ((dim + dl) % 2 != 0) throw std::logic_error("dimension and trace have different parity");
  EigenspaceDims out{(dim + dl) / 2, (dim - dl) / 2};
  if (out.plus < 0 || out.minus < 0) throw std::logic_error("negative eigenspace dimension");
  return out;
}

R2Asymptotics delta_r2_asymptotics(int k, i64 q, const FactoredInt &M) {
  check_delta_args(k, q, 2, M);
  R2Asymptotics a;
  a.weight_level_term = Rational(1 - k, 12) * kappa_infty(M);
  bool shape = is_cubefree(M) || (M.value % 2 == 0 && is_cubefree(factor(M.value / 2)));
  bool primes_ok = true;
  for (auto [p, m] : M.factors)
    if (m == 1 && p % 4 == 1) primes_ok = false;
  if (shape && primes_ok) {
    TwoSplit sp = split2(M);
    a.large_q_term = Rational(1, 4) * Rational(weight_sign(k) * b_2e(sp.e)) * kappa_minus(-1, sp.odd) * Rational(q);
  }
  return a;
}

Rational small_ell_trace(int k, i64 Q, const FactoredInt &M, i64 ell) {
  if (4 * ell >= Q) throw std::invalid_argument("small_ell_trace needs 4 ell < Q");
  TwoSplit sp = split2(M);
  i64 n = checked_mul(Q, ell);
  Rational lead = Rational(-1, 2) * Rational(parity_sign(k / 2 - 1) * ipow(ell, k / 2 - 1));
  Rational r = lead * alpha1(n, sp.e) * kappa_minus(-n, sp.odd);
  if (k == 2) r += Rational(mobius(M) * sigma(ell));
  return r;
}

SmallEllVerdict thm16_checks(int k, i64 q, const FactoredInt &M, i64 ell) {
  SmallEllVerdict v;
  if (!is_prime(q) || !is_prime(ell)) throw std::invalid_argument("q and ell must be prime");
  if (4 * ell >= q) throw std::invalid_argument("need ell < q/4");
  if (std::gcd(M.value, q * ell) != 1) throw std::invalid_argument("M must be coprime to q ell");
  bool shape = is_squarefree(M) || (M.value % 2 == 0 && is_squarefree(factor(M.value / 2)));
  if (!shape) throw std::invalid_argument("M must be squarefree or twice a squarefree number");

  v.delta = delta_closed_form(k, q, 1, M).to_integer();
  TraceQuery tq{k, q, ell};
  v.trace = t_new(1, M, tq).to_integer();
  if (is_squarefree(M)) {
    v.trace_plain = t_new_squarefree({k, 1, checked_mul(q, M.value), ell}).to_integer();
  } else {
    // W at a prime away from the level acts trivially, so r = 0 gives tr T_ell.
    i64 away = 2;
    while (!is_prime(away) || (q * ell * M.value) % away == 0) ++away;
    FactoredInt N = multiply(M, FactoredInt::from_factors({{q, 1}}));
    v.trace_plain = t_new(0, N, TraceQuery{k, away, ell}).to_integer();
  }
  if (k == 2) {
    v.why_not = "k = 2 is outside the certified range";
    return v;
  }
  if (v.delta == 0) {
    v.why_not = "Delta_k(q, M) = 0";
    return v;
  }
  v.covered = true;
  bool split = false;
  for (auto [p, m] : M.factors)
    if (p != 2 && kronecker(-q * ell, p) == 1) split = true;
  v.predicted_zero = split || (M.value % 2 == 0 && (q * ell) % 8 == 7);
  v.zero_ok = v.predicted_zero == (v.trace == 0);
  v.sign_ok = v.trace == 0 || sign_of(v.trace) == sign_of(v.delta);
  if (v.trace != 0) {
    // 2 tr_{+} = T + TW, 2 tr_{-} = T - TW
    i64 plus = v.trace_plain + v.trace, minus = v.trace_plain - v.trace;
    v.eigen_sign_ok = sign_of(plus) == sign_of(v.delta) && sign_of(minus) == -sign_of(v.delta);
  }
  return v;
}

} // namespace alsigns

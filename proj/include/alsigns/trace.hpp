#pragma once

#include "alsigns/arith.hpp"
#include "alsigns/rational.hpp"

namespace alsigns {

// Trace of T_ell W_q on S_k(q^r M). The fixed data (k, q, ell); r and M vary
// through the recursions so they are passed separately.
struct TraceQuery {
  int k = 2;
  i64 q = 2;
  i64 ell = 1;

  // Throws std::invalid_argument if k is odd or < 2, q is not prime, ell < 1,
  // or q, ell, M are not pairwise coprime.
  void validate(const FactoredInt &M) const;
};

struct SquarefreeTraceQuery {
  int k = 2;
  i64 Q = 1;
  i64 M = 1;
  i64 ell = 1;

  void validate() const;
};

// p_k(s, ell) with s^2 = S; p_k depends only on s^2 for even k.
Rational p_k(i64 S, i64 ell, int k);
i64 p_k_int(i64 S, i64 ell, int k);
// Tabulated p_k(s, 1) for s^2 in {1, 2, 3, 4}.
i64 p_k_special(int s_squared, int k);

// alpha_1(-n; e) for n > 0 and e = v_2(M).
Rational alpha1(i64 n, int e);

Rational A1(int eps, int r, const FactoredInt &M, const TraceQuery &query);
Rational A2(int r, const FactoredInt &M, const TraceQuery &query);
Rational A3(const TraceQuery &query);

// Trace of T_ell W_q on the full space S_k(q^r M); zero for r < 0.
Rational t_full(int r, const FactoredInt &M, const TraceQuery &query);
// Trace of T_ell W_q on the newspace S_k^new(q^r M); zero for r < 0.
Rational t_new(int r, const FactoredInt &M, const TraceQuery &query);
inline i64 t_new_int(int r, i64 M, const TraceQuery &query) {
  return t_new(r, factor(M), query).to_integer();
}

// xi_Delta(p) for p prime, Delta < 0 or Delta = 0.
Rational xi_prime(i64 delta, i64 p);

// Trace of T_ell W_Q on S_k^new(QM) for squarefree QM.
Rational t_new_squarefree(const SquarefreeTraceQuery &query);
// Trace of T_n W_N on S_k(N), N squarefree, (n, N) = 1 and 4n < N.
Rational t_full_fricke(int k, i64 N, i64 n);

} // namespace alsigns

#pragma once

#include "alsigns/arith.hpp"
#include "alsigns/rational.hpp"

#include <optional>
#include <string>

namespace alsigns {

// Multiplicative weights appearing in the closed forms.
Rational kappa_minus(i64 Delta, const FactoredInt &M); // kappa_Delta(M)
Rational kappa_infty(const FactoredInt &M);
Rational alpha2(const FactoredInt &M);

// dim S_k^new(N) from the multiplicative closed formula.
i64 newspace_dim(int k, const FactoredInt &N);
inline i64 newspace_dim(int k, i64 N) { return newspace_dim(k, factor(N)); }

// Delta_k(q^r, M) = trace of W_q on S_k^new(q^r M), by the closed forms.
Rational delta_closed_form(int k, i64 q, int r, const FactoredInt &M);

enum class ZeroReason { none, not_cubefree, split_prime, two_adic_case, exceptional_small_level };
std::string to_string(ZeroReason z);

struct PredicateVerdict {
  bool covered = false;
  std::string tag;          // which statement applies, or why none does
  bool zero = false;        // predicted Delta == 0
  std::optional<int> sign;  // predicted sign when nonzero and the statement gives one
  ZeroReason reason = ZeroReason::none;
};

// Verdict of the equidistribution statements, computed without evaluating Delta.
PredicateVerdict equidistribution_predicate(int k, i64 q, int r, const FactoredInt &M);

// Sign of the alpha_1(-q^r; e) entry of the case table (0 when it vanishes).
int b_req(int r, int e, i64 q);
// b_{2,e}: 1 for e = 0, 3; -1 for e = 1, 2; 0 for e >= 4.
int b_2e(int e);

struct DeltaResult {
  i64 value = 0;
  PredicateVerdict verdict;
};

DeltaResult delta(int k, i64 q, int r, const FactoredInt &M);
inline DeltaResult delta(int k, i64 q, int r, i64 M) { return delta(k, q, r, factor(M)); }

struct EigenspaceDims {
  i64 plus = 0;
  i64 minus = 0;
};

EigenspaceDims eigenspace_dims(int k, i64 q, int r, const FactoredInt &M);

struct R2Asymptotics {
  Rational weight_level_term;            // (1-k)/12 kappa_infty(M)
  std::optional<Rational> large_q_term;  // (1/4)(-1)^{k/2} b_{2,e} kappa_{-1}(M') q
};

R2Asymptotics delta_r2_asymptotics(int k, i64 q, const FactoredInt &M);

// Trace of T_ell W_Q on S_k^new(QM) for 4 ell < Q via alpha_1 and kappa.
Rational small_ell_trace(int k, i64 Q, const FactoredInt &M, i64 ell);

struct SmallEllVerdict {
  bool covered = false;
  std::string why_not;
  i64 delta = 0;
  i64 trace = 0;             // tr T_ell W_q on S_k^new(qM)
  bool predicted_zero = false;
  bool zero_ok = false;      // predicted_zero == (trace == 0)
  bool sign_ok = false;      // trace == 0 or sign(trace) == sign(delta)
  i64 trace_plain = 0;       // tr T_ell on S_k^new(qM)
  bool eigen_sign_ok = false; // both eigenspace traces carry signs +-sign(delta)
};

SmallEllVerdict thm16_checks(int k, i64 q, const FactoredInt &M, i64 ell);

} // namespace alsigns

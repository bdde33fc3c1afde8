#include "alsigns/acceptance.hpp"

#include "alsigns/arith.hpp"
#include "alsigns/classnum.hpp"
#include "alsigns/murmur.hpp"
#include "alsigns/parallel.hpp"
#include "alsigns/signs.hpp"
#include "alsigns/trace.hpp"
#include "alsigns/twist.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace alsigns {

namespace {

// Pinned thresholds.
constexpr double kOracleSeconds = 60;
constexpr double kGridSeconds = 300;
constexpr double kRatioLo = 0.9, kRatioHi = 1.1;
constexpr double kFitRelativeRms = 0.10;
constexpr double kFitEpsilon = 0.02;
constexpr double kCancellationRatio = 0.5;
constexpr double kMurmurSeconds = 1800;
constexpr int kMaxDistinctDelta = 2;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

template <class C> std::string set_str(const C &c) {
  std::string s = "{";
  bool first = true;
  for (auto v : c) {
    s += (first ? "" : ",") + std::to_string(v);
    first = false;
  }
  return s + "}";
}

struct GridPoint {
  i64 q;
  int r;
};

std::vector<GridPoint> prime_power_grid(i64 qr_max) {
  std::vector<GridPoint> g;
  for (i64 q : primes_up_to(qr_max))
    for (int r = 1; ipow(q, r) <= qr_max; ++r) g.push_back({q, r});
  return g;
}

constexpr i64 kGridQrMax = 200, kGridMMax = 300;
constexpr int kGridKMax = 14;

CriterionResult c1_oracle() {
  CriterionResult res{1, "class-number oracle", false, "", 0};
  auto t0 = Clock::now();
  i64 checked = 0, bad = 0;
  std::string first;
  for (i64 n = 3; n <= 20000; ++n) {
    i64 d = -n;
    if (!is_discriminant(d)) continue;
    ++checked;
    if (hurwitz(d) != hurwitz_oracle(d)) {
      if (first.empty()) first = " first at " + std::to_string(d);
      ++bad;
    }
  }
  double s = since(t0);
  res.pass = bad == 0 && s < kOracleSeconds;
  res.detail = std::to_string(checked) + " discriminants, " + std::to_string(bad) + " mismatches" + first +
               ", single-threaded " + fmt(s, 3) + " s (limit " + fmt(kOracleSeconds) + " s)";
  return res;
}

CriterionResult c2_two_path(const SweepReport &rep) {
  CriterionResult res{2, "two-path exactness", false, "", 0};
  res.pass = rep.path_mismatches == 0 && rep.seconds < kGridSeconds;
  res.detail = std::to_string(rep.points) + " (k,q,r,M) points, " + std::to_string(rep.path_mismatches) +
               " mismatches, grid sweep " + fmt(rep.seconds, 3) + " s (limit " + fmt(kGridSeconds) + " s)";
  if (rep.path_mismatches) res.detail += "; first " + rep.first_mismatch;
  return res;
}

CriterionResult c3_predicates(const SweepReport &rep) {
  CriterionResult res{3, "equidistribution predicates", false, "", 0};
  const std::set<i64> stated1{5, 7, 13, 17}, stated2{5, 11, 13, 19, 37, 43, 67, 163};
  std::set<i64> got1, got2;
  for (i64 q : primes_up_to(kGridQrMax)) {
    if (q < 5) continue;
    if (delta_closed_form(2, q, 1, factor(1)).is_zero()) got1.insert(q);
    if (delta_closed_form(2, q, 1, factor(2)).is_zero()) got2.insert(q);
  }
  bool list1 = got1 == stated1, list2 = got2 == stated2;
  res.pass = rep.zero_mismatches == 0 && rep.sign_mismatches == 0 && list1 && list2;
  std::ostringstream os;
  os << rep.covered << " covered points, " << rep.zero_mismatches << " zero-iff mismatches, " << rep.signed_verdicts
     << " signed verdicts with " << rep.sign_mismatches << " sign mismatches; M=1 zero set " << set_str(got1)
     << (list1 ? " matches " : " differs from stated ") << set_str(stated1) << "; M=2 zero set " << set_str(got2)
     << (list2 ? " matches stated list" : " differs from stated list");
  if (rep.zero_mismatches || rep.sign_mismatches) os << "; first mismatch " << rep.first_mismatch;
  res.detail = os.str();
  return res;
}

CriterionResult c4_squarefree(int workers) {
  CriterionResult res{4, "squarefree and Fricke trace consistency", false, "", 0};
  std::vector<i64> Ns;
  for (i64 N = 2; N <= 500; ++N)
    if (is_squarefree(factor(N))) Ns.push_back(N);
  std::vector<i64> n1(Ns.size()), b1(Ns.size()), n2(Ns.size()), b2(Ns.size());
  std::vector<std::string> first(Ns.size());
  parallel_for(Ns.size(), workers, [&](std::size_t i) {
    const i64 N = Ns[i];
    FactoredInt F = factor(N);
    if (N <= 300) {
      for (auto [q, e] : F.factors) {
        i64 M = N / q;
        FactoredInt MF = factor(M);
        for (i64 ell : {1, 2, 3, 5, 7}) {
          if (std::gcd(ell, N) != 1) continue;
          for (int k = 2; k <= 8; k += 2) {
            ++n1[i];
            Rational a = t_new_squarefree({k, q, M, ell});
            Rational b = t_new(1, MF, TraceQuery{k, q, ell});
            if (a != b) {
              ++b1[i];
              if (first[i].empty())
                first[i] = "Q=" + std::to_string(q) + " M=" + std::to_string(M) + " ell=" + std::to_string(ell) +
                           " k=" + std::to_string(k);
            }
          }
        }
      }
    }
    for (i64 n = 1; 4 * n < N; ++n) {
      if (std::gcd(n, N) != 1) continue;
      for (int k = 2; k <= 8; k += 2) {
        ++n2[i];
        if (t_full_fricke(k, N, n) != t_new_squarefree({k, N, 1, n})) {
          ++b2[i];
          if (first[i].empty())
            first[i] = "Fricke N=" + std::to_string(N) + " n=" + std::to_string(n) + " k=" + std::to_string(k);
        }
      }
    }
  });
  auto sum = [](const std::vector<i64> &v) { return std::accumulate(v.begin(), v.end(), i64{0}); };
  res.pass = sum(b1) == 0 && sum(b2) == 0;
  res.detail = std::to_string(sum(n1)) + " squarefree-vs-pipeline checks (" + std::to_string(sum(b1)) +
               " mismatches), " + std::to_string(sum(n2)) + " Fricke checks (" + std::to_string(sum(b2)) +
               " mismatches)";
  for (auto &f : first)
    if (!f.empty()) {
      res.detail += "; first " + f;
      break;
    }
  return res;
}

CriterionResult c5_small_ell() {
  CriterionResult res{5, "small-ell trace signs, weight 4", false, "", 0};
  i64 checks = 0, covered = 0, zero_bad = 0, sign_bad = 0, zeros = 0;
  std::string first;
  for (i64 M : {1, 3, 6}) {
    FactoredInt F = factor(M);
    for (i64 q : primes_up_to(500)) {
      if (M % q == 0) continue;
      for (i64 ell : primes_up_to(q)) {
        if (4 * ell >= q) break;
        if (M % ell == 0) continue;
        ++checks;
        SmallEllVerdict v = thm16_checks(4, q, F, ell);
        if (!v.covered) continue;
        ++covered;
        if (v.predicted_zero) ++zeros;
        if (!v.zero_ok) ++zero_bad;
        if (!v.sign_ok) ++sign_bad;
        if ((!v.zero_ok || !v.sign_ok) && first.empty())
          first = "; first at M=" + std::to_string(M) + " q=" + std::to_string(q) + " ell=" + std::to_string(ell);
      }
    }
  }
  res.pass = zero_bad == 0 && sign_bad == 0 && covered > 0;
  res.detail = std::to_string(checks) + " (M,q,ell) triples, " + std::to_string(covered) + " with Delta != 0, " +
               std::to_string(zeros) + " predicted zeros; " + std::to_string(zero_bad) + " zero-iff and " +
               std::to_string(sign_bad) + " sign exceptions" + first;
  return res;
}

CriterionResult c6_eigenspace_signs() {
  CriterionResult res{6, "eigenspace trace signs, ell=2, k=4", false, "", 0};
  std::vector<i64> qs;
  for (i64 q : primes_up_to(2000))
    if (q >= 200) qs.push_back(q);
  std::vector<i64> failures;
  i64 both_nonzero = 0;
  for (i64 q : qs) {
    i64 d = delta_closed_form(4, q, 1, factor(1)).to_integer();
    i64 t = t_new_squarefree({4, q, 1, 2}).to_integer();
    i64 tp = t_new_squarefree({4, 1, q, 2}).to_integer();
    i64 plus = tp + t, minus = tp - t; // twice the eigenspace traces
    if (plus == 0 || minus == 0 || d == 0) continue;
    ++both_nonzero;
    if (sign_of(plus) != sign_of(d) || sign_of(minus) != -sign_of(d)) failures.push_back(q);
  }
  i64 persistent = qs.front();
  if (!failures.empty()) {
    auto it = std::upper_bound(qs.begin(), qs.end(), failures.back());
    persistent = it == qs.end() ? 0 : *it;
  }
  res.pass = failures.empty();
  std::ostringstream os;
  os << both_nonzero << " primes in [200,2000] with both eigenspace traces nonzero, " << failures.size()
     << " sign failures";
  if (!failures.empty()) {
    std::vector<i64> head(failures.begin(), failures.begin() + std::min<std::size_t>(failures.size(), 8));
    os << " " << set_str(head) << (failures.size() > 8 ? "..." : "");
  }
  os << "; holds persistently from q = " << persistent;
  res.detail = os.str();
  return res;
}

CriterionResult c7_r2_asymptotics(std::uint64_t seed) {
  CriterionResult res{7, "exponent-2 asymptotics", false, "", 0};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kd(1, 200);
  std::uniform_int_distribution<i64> md(1, 1000);
  double lo1 = 1e9, hi1 = -1e9;
  int out1 = 0, n1 = 0;
  std::string first;
  while (n1 < 50) {
    int k = 2 * kd(rng);
    i64 M = md(rng);
    if (M % 5 == 0 || k + M < 300) continue;
    ++n1;
    FactoredInt F = factor(M);
    double ratio =
        delta_closed_form(k, 5, 2, F).to_double() / (Rational(1 - k, 12) * kappa_infty(F)).to_double();
    lo1 = std::min(lo1, ratio);
    hi1 = std::max(hi1, ratio);
    if (ratio < kRatioLo || ratio > kRatioHi) {
      ++out1;
      if (first.empty()) first = "; first outside at k=" + std::to_string(k) + " M=" + std::to_string(M);
    }
  }
  std::vector<i64> qs;
  for (i64 q = 10000; qs.size() < 5; ++q)
    if (is_prime(q)) qs.push_back(q);
  double lo2 = 1e9, hi2 = -1e9;
  int out2 = 0, n2 = 0;
  for (i64 q : qs)
    for (int k : {2, 4, 6, 8})
      for (i64 M : {1, 2, 3, 6, 7, 8, 9, 11, 14, 18}) {
        FactoredInt F = factor(M);
        auto a = delta_r2_asymptotics(k, q, F);
        if (!a.large_q_term) continue;
        ++n2;
        double ratio = delta_closed_form(k, q, 2, F).to_double() / a.large_q_term->to_double();
        lo2 = std::min(lo2, ratio);
        hi2 = std::max(hi2, ratio);
        if (ratio < kRatioLo || ratio > kRatioHi) ++out2;
      }
  res.pass = out1 == 0 && out2 == 0 && n2 > 0;
  res.detail = "q=5: " + std::to_string(n1) + " sampled (k,M) with k+M>=300 (seed " + std::to_string(seed) +
               "), ratio in [" + fmt(lo1) + "," + fmt(hi1) + "], " + std::to_string(out1) + " outside [" +
               fmt(kRatioLo) + "," + fmt(kRatioHi) + "]" + first + "; q~1e4: " + std::to_string(n2) +
               " cases, ratio in [" + fmt(lo2, 6) + "," + fmt(hi2, 6) + "], " + std::to_string(out2) + " outside";
  return res;
}

struct TwistTally {
  int samples = 0;
  int bad = 0;
  i64 traces = 0;
  std::string first;
};

void twist_case(TwistTally &t, int k, i64 q, i64 M, const TwistCharacter &expect,
                const std::vector<TwistCharacter> &chars) {
  ++t.samples;
  FactoredInt F = factor(M);
  std::string where = "k=" + std::to_string(k) + " q=" + std::to_string(q) + " M=" + std::to_string(M);
  auto fail = [&](const std::string &why) {
    ++t.bad;
    if (t.first.empty()) t.first = why + " at " + where;
  };
  auto got = quadtwist_bijection(k, q, 1, F);
  if (!got || !(*got == expect)) fail("bijection predicate");
  if (delta(k, q, 1, F).value != 0) fail("Delta != 0");
  for (const auto &chi : chars)
    for (i64 ell = 1; ell <= 50; ++ell) {
      if (std::gcd(ell, q * M) != 1 || chi(ell) != 1) continue;
      ++t.traces;
      if (!t_new(1, F, TraceQuery{k, q, ell}).is_zero()) fail("trace at ell=" + std::to_string(ell));
    }
}

CriterionResult c8_twist(std::uint64_t seed) {
  CriterionResult res{8, "quadratic-twist vanishing", false, "", 0};
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<i64> &v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
  const std::vector<i64> ks{2, 4, 6, 8};

  TwistTally odd, m1, pm2;
  std::set<std::tuple<i64, i64, i64>> seen;
  std::vector<i64> ps{3, 5, 7, 11, 13}, qs = primes_up_to(100);
  while (odd.samples < 20) {
    i64 p = pick(ps), q = pick(qs), k = pick(ks);
    if (q == p || kronecker(q, p) != -1 || !seen.insert({p, q, k}).second) continue;
    twist_case(odd, static_cast<int>(k), q, p * p * p, TwistCharacter::odd(p), {TwistCharacter::odd(p)});
  }
  std::vector<i64> q3, q5;
  for (i64 q : primes_up_to(300)) {
    if (q % 4 == 3) q3.push_back(q);
    if (q % 8 == 5) q5.push_back(q);
  }
  seen.clear();
  while (m1.samples < 20) {
    i64 q = pick(q3), k = pick(ks);
    if (!seen.insert({0, q, k}).second) continue;
    twist_case(m1, static_cast<int>(k), q, 32, TwistCharacter::chi_minus_one(), {TwistCharacter::chi_minus_one()});
  }
  seen.clear();
  while (pm2.samples < 20) {
    i64 q = pick(q5), k = pick(ks);
    if (!seen.insert({1, q, k}).second) continue;
    twist_case(pm2, static_cast<int>(k), q, 128, TwistCharacter::chi_two(),
               {TwistCharacter::chi_two(), TwistCharacter::chi_minus_two()});
  }
  res.pass = odd.bad == 0 && m1.bad == 0 && pm2.bad == 0;
  auto line = [](const std::string &name, const TwistTally &t) {
    return name + ": " + std::to_string(t.samples) + " samples, " + std::to_string(t.traces) + " traces, " +
           std::to_string(t.bad) + " failures" + (t.first.empty() ? "" : " (" + t.first + ")");
  };
  res.detail = line("p^3/chi_p", odd) + "; " + line("2^5/chi_-1", m1) + "; " + line("2^7/chi_+-2", pm2) +
               " (seed " + std::to_string(seed) + ")";
  return res;
}

CriterionResult c9_murmurations(int workers) {
  CriterionResult res{9, "murmuration properties", false, "", 0};
  auto t0 = Clock::now();
  std::ostringstream os;
  bool fit_ok = true;
  os << "(a)";
  for (i64 M : {1, 5})
    for (int k : {2, 4}) {
      auto spec = FamilySpec::parse("I:M=" + std::to_string(M), k);
      double xmax = 1.0 / (4.0 * M) - kFitEpsilon;
      ScanOptions so;
      so.workers = workers;
      so.ell_max = static_cast<i64>(xmax * 500) + 1;
      auto pts = scan_WQ(spec, 500, so);
      os << " M=" << M << ",k=" << k << ": ";
      try {
        auto f = sqrt_fit(pts, xmax, k == 2 ? FitShape::sqrt_plus_constant : FitShape::sqrt_only);
        bool ok = f.relative_rms < kFitRelativeRms;
        fit_ok = fit_ok && ok;
        os << (ok ? "ok" : "FAIL") << " n=" << f.n << " rel.rms=" << fmt(f.relative_rms, 3);
        if (k == 2) {
          auto g = sqrt_fit(pts, xmax, FitShape::sqrt_plus_linear);
          os << " (c*sqrt(x)+d*x: " << fmt(g.relative_rms, 3) << ")";
        }
      } catch (const std::invalid_argument &e) {
        fit_ok = false;
        os << "FAIL " << e.what();
      }
      os << ";";
    }
  auto c = cancellation_diag(2, 500, Rational(2), workers);
  bool cancel_ok = c.max_sum < kCancellationRatio * c.max_diff;
  os << " (b) " << (cancel_ok ? "ok" : "FAIL") << " max|A+ + A-|=" << fmt(c.max_sum) << " max|A+ - A-|="
     << fmt(c.max_diff) << " ratio=" << fmt(c.ratio, 3) << ";";
  std::vector<i64> ells = primes_up_to(50);
  i64 levels = 0, checks = 0, fails = 0;
  std::string first;
  struct Win {
    const char *spec;
    int k;
    i64 X;
  };
  for (Win w : {Win{"III:r=2,fixed=2,idx=1", 2, 500}, Win{"III:r=2,fixed=2,idx=2", 4, 500},
                Win{"III:r=2,fixed=,idx=1", 2, 300}, Win{"III:r=3,fixed=2,idx=1,3", 2, 500},
                Win{"III:r=3,fixed=,idx=", 4, 400}}) {
    auto rep = check_eigenspace_inversion(FamilySpec::parse(w.spec, w.k), w.X, ells);
    levels += rep.levels;
    checks += rep.checks;
    fails += rep.failures;
    if (first.empty()) first = rep.first_failure;
  }
  bool inv_ok = fails == 0 && levels > 0;
  os << " (c) " << (inv_ok ? "ok" : "FAIL") << " " << levels << " levels, " << checks << " exact checks, " << fails
     << " failures" << (first.empty() ? "" : " (" + first + ")");
  double s = since(t0);
  os << "; " << fmt(s, 3) << " s";
  res.pass = fit_ok && cancel_ok && inv_ok && s < kMurmurSeconds;
  res.detail = os.str();
  return res;
}

CriterionResult c10_bounded_in_k() {
  CriterionResult res{10, "boundedness in k", false, "", 0};
  std::ostringstream os;
  bool ok = true;
  for (int r : {1, 3}) {
    std::set<i64> vals;
    for (int k = 2; k <= 100; k += 2) vals.insert(delta(k, 5, r, factor(6)).value);
    ok = ok && static_cast<int>(vals.size()) <= kMaxDistinctDelta;
    os << (r == 3 ? "; " : "") << "q=5 r=" << r << " M=6: values " << set_str(vals);
  }
  res.pass = ok;
  res.detail = os.str();
  return res;
}

} // namespace

SweepReport equidist_sweep(int k_min, int k_max, long long qr_max, long long m_max, int workers) {
  if (k_min < 2 || k_min > k_max) throw std::invalid_argument("need 2 <= k_min <= k_max");
  if (qr_max < 2 || m_max < 1) throw std::invalid_argument("need qr_max >= 2 and M_max >= 1");
  auto t0 = Clock::now();
  auto grid = prime_power_grid(qr_max);
  std::vector<SweepReport> part(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t i) {
    auto [q, r] = grid[i];
    SweepReport &p = part[i];
    auto note = [&](const std::string &what, int k, i64 M) {
      if (p.first_mismatch.empty())
        p.first_mismatch = what + " at k=" + std::to_string(k) + " q=" + std::to_string(q) + " r=" +
                           std::to_string(r) + " M=" + std::to_string(M);
    };
    for (i64 M = 1; M <= m_max; ++M) {
      if (M % q == 0) continue;
      FactoredInt F = factor(M);
      for (int k = k_min + (k_min & 1); k <= k_max; k += 2) {
        ++p.points;
        DeltaResult dr = delta(k, q, r, F);
        const i64 d = dr.value;
        Rational pipe = t_new(r, F, TraceQuery{k, q, 1});
        if (pipe != Rational(d)) {
          ++p.path_mismatches;
          note("closed form " + std::to_string(d) + " vs pipeline " + pipe.str(), k, M);
        }
        const PredicateVerdict &v = dr.verdict;
        if (!v.covered) continue;
        ++p.covered;
        if (v.zero != (d == 0)) {
          ++p.zero_mismatches;
          note(v.tag + " zero verdict, Delta=" + std::to_string(d), k, M);
        }
        if (v.sign && d != 0) {
          ++p.signed_verdicts;
          if (*v.sign != sign_of(d)) {
            ++p.sign_mismatches;
            note(v.tag + " sign verdict, Delta=" + std::to_string(d), k, M);
          }
        }
      }
    }
  });
  SweepReport rep;
  for (auto &p : part) {
    rep.points += p.points;
    rep.path_mismatches += p.path_mismatches;
    rep.covered += p.covered;
    rep.zero_mismatches += p.zero_mismatches;
    rep.signed_verdicts += p.signed_verdicts;
    rep.sign_mismatches += p.sign_mismatches;
    if (rep.first_mismatch.empty()) rep.first_mismatch = p.first_mismatch;
  }
  rep.seconds = since(t0);
  return rep;
}

std::string format_result(const CriterionResult &r) {
  return std::string(r.pass ? "[PASS] " : "[FAIL] ") + std::to_string(r.id) + " " + r.name + " (" + fmt(r.seconds, 3) +
         " s): " + r.detail;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &opt,
                                            const std::function<void(const CriterionResult &)> &on_result) {
  const int w = std::max(1, opt.workers);
  std::optional<SweepReport> sweep;
  auto grid_sweep = [&]() -> const SweepReport & {
    if (!sweep) sweep = equidist_sweep(2, kGridKMax, kGridQrMax, kGridMMax, w);
    return *sweep;
  };
  std::vector<std::pair<int, std::function<CriterionResult()>>> all{
      {1, [] { return c1_oracle(); }},
      {2, [&] { return c2_two_path(grid_sweep()); }},
      {3, [&] { return c3_predicates(grid_sweep()); }},
      {4, [w] { return c4_squarefree(w); }},
      {5, [] { return c5_small_ell(); }},
      {6, [] { return c6_eigenspace_signs(); }},
      {7, [&opt] { return c7_r2_asymptotics(opt.seed); }},
      {8, [&opt] { return c8_twist(opt.seed); }},
      {9, [w] { return c9_murmurations(w); }},
      {10, [] { return c10_bounded_in_k(); }},
  };
  std::vector<CriterionResult> out;
  for (auto &[id, fn] : all) {
    if (!opt.only.empty() && !opt.only.count(id)) continue;
    auto t0 = Clock::now();
    CriterionResult r;
    try {
      r = fn();
    } catch (const std::exception &e) {
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = since(t0);
    if (on_result) on_result(r);
    out.push_back(r);
  }
  return out;
}

} // namespace alsigns

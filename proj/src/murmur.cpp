#include "alsigns/murmur.hpp"

#include "alsigns/parallel.hpp"
#include "alsigns/signs.hpp"
#include "alsigns/trace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace alsigns {

int default_workers() {
  unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

namespace {

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

i64 parse_int(const std::string &s, const std::string &what) {
  std::size_t pos = 0;
  i64 v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception &) {
    pos = 0;
  }
  if (s.empty() || pos != s.size()) throw std::invalid_argument("bad integer for " + what + ": '" + s + "'");
  return v;
}

template <class T> std::vector<T> parse_list(const std::string &s, const std::string &what) {
  std::vector<T> out;
  if (s.empty()) return out;
  for (auto &part : split(s, ',')) out.push_back(static_cast<T>(parse_int(part, what)));
  return out;
}

template <class T> std::string join(const std::vector<T> &v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

i64 window_top(i64 X, const Rational &beta) {
  return static_cast<i64>(static_cast<i128>(beta.num()) * X / beta.den());
}

long double ell_scale(i64 ell, int k) { return std::pow(static_cast<long double>(ell), 1.0L - k / 2.0L); }

i64 sqf_trace(int k, i64 Q, i64 M, i64 ell) {
  return t_new_squarefree(SquarefreeTraceQuery{k, Q, M, ell}).to_integer();
}

// Primes dividing every level of the family.
std::vector<i64> structural_primes(const FamilySpec &spec) {
  i64 n = 1;
  if (spec.type == FamilyType::I) n = spec.M;
  if (spec.type == FamilyType::II) n = spec.Q;
  std::vector<i64> out;
  for (auto [p, e] : factor(n).factors) out.push_back(p);
  if (spec.type == FamilyType::III)
    for (i64 p : spec.fixed) out.push_back(p);
  return out;
}

std::vector<i64> scan_primes(const FamilySpec &spec, i64 X, const ScanOptions &opt) {
  i64 hi = opt.ell_max > 0 ? opt.ell_max : 4 * X;
  auto skip = structural_primes(spec);
  std::vector<i64> out;
  for (i64 p : primes_up_to(hi))
    if (p >= opt.ell_min && std::find(skip.begin(), skip.end(), p) == skip.end()) out.push_back(p);
  return out;
}

} // namespace

FamilySpec FamilySpec::parse(const std::string &text, int k, Rational beta) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("family spec needs '<type>:': " + text);
  FamilySpec s;
  s.k = k;
  s.beta = beta;
  std::string type = text.substr(0, colon);
  if (type == "I")
    s.type = FamilyType::I;
  else if (type == "II")
    s.type = FamilyType::II;
  else if (type == "III")
    s.type = FamilyType::III;
  else
    throw std::invalid_argument("unknown family type '" + type + "'");

  std::map<std::string, std::string> kv;
  std::string key;
  for (auto &tok : split(text.substr(colon + 1), ',')) {
    auto eq = tok.find('=');
    if (eq != std::string::npos) {
      key = tok.substr(0, eq);
      if (kv.count(key)) throw std::invalid_argument("duplicate key '" + key + "' in " + text);
      kv[key] = tok.substr(eq + 1);
    } else if (!key.empty()) {
      kv[key] += "," + tok;
    } else if (!tok.empty()) {
      throw std::invalid_argument("expected key=value in " + text);
    }
  }
  auto take = [&](const std::string &name) -> std::optional<std::string> {
    auto it = kv.find(name);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  switch (s.type) {
  case FamilyType::I: {
    auto m = take("M");
    if (!m) throw std::invalid_argument("Type I needs M=<m>");
    s.M = parse_int(*m, "M");
    if (auto o = take("omega")) s.omega = static_cast<int>(parse_int(*o, "omega"));
    break;
  }
  case FamilyType::II: {
    auto q = take("Q"), m = take("M");
    if (!q || !m) throw std::invalid_argument("Type II needs Q=<q>,M=<N|sqf|sqf_r>");
    s.Q = parse_int(*q, "Q");
    if (*m == "N") {
      s.m_range = MRange::all;
    } else if (*m == "sqf") {
      s.m_range = MRange::squarefree;
    } else if (m->rfind("sqf_", 0) == 0) {
      s.m_range = MRange::squarefree_r;
      s.m_omega = static_cast<int>(parse_int(m->substr(4), "M=sqf_<r>"));
    } else {
      throw std::invalid_argument("Type II M must be N, sqf or sqf_<r>, got '" + *m + "'");
    }
    break;
  }
  case FamilyType::III: {
    auto r = take("r");
    if (!r) throw std::invalid_argument("Type III needs r=<r>");
    s.r = static_cast<int>(parse_int(*r, "r"));
    if (auto f = take("fixed")) s.fixed = parse_list<i64>(*f, "fixed");
    if (auto i = take("idx")) s.idx = parse_list<int>(*i, "idx");
    break;
  }
  }
  if (!kv.empty()) throw std::invalid_argument("unknown key '" + kv.begin()->first + "' in " + text);
  s.validate();
  return s;
}

std::string FamilySpec::encode() const {
  switch (type) {
  case FamilyType::I:
    return "I:M=" + std::to_string(M) + (omega ? ",omega=" + std::to_string(*omega) : "");
  case FamilyType::II: {
    std::string m = m_range == MRange::all ? "N" : m_range == MRange::squarefree ? "sqf" : "sqf_" + std::to_string(m_omega);
    return "II:Q=" + std::to_string(Q) + ",M=" + m;
  }
  case FamilyType::III:
    return "III:r=" + std::to_string(r) + ",fixed=" + join(fixed) + ",idx=" + join(idx);
  }
  return "?";
}

void FamilySpec::validate() const {
  if (k < 2 || k % 2) throw std::invalid_argument("weight must be even and at least 2");
  if (beta <= Rational(1)) throw std::invalid_argument("beta must exceed 1");
  switch (type) {
  case FamilyType::I:
    if (M < 1 || !is_squarefree(factor(M))) throw std::invalid_argument("Type I needs a squarefree M >= 1");
    if (omega && *omega < 0) throw std::invalid_argument("omega must be nonnegative");
    break;
  case FamilyType::II:
    if (Q < 1 || !is_squarefree(factor(Q))) throw std::invalid_argument("Type II needs a squarefree Q >= 1");
    if (m_range == MRange::all && Q != 1 && !is_prime(Q))
      throw std::invalid_argument("Type II with M over all integers needs Q = 1 or Q prime");
    if (m_range == MRange::squarefree_r && m_omega < 0) throw std::invalid_argument("sqf_<r> needs r >= 0");
    break;
  case FamilyType::III: {
    if (r < 2) throw std::invalid_argument("Type III needs r >= 2");
    if (static_cast<int>(fixed.size()) >= r) throw std::invalid_argument("Type III needs fewer than r fixed primes");
    for (std::size_t i = 0; i < fixed.size(); ++i) {
      if (!is_prime(fixed[i])) throw std::invalid_argument("fixed entries must be prime");
      if (i && fixed[i] <= fixed[i - 1]) throw std::invalid_argument("fixed primes must be increasing");
    }
    if (static_cast<int>(idx.size()) >= r) throw std::invalid_argument("Type III needs fewer than r indices");
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] < 1 || sorted[i] > r) throw std::invalid_argument("idx entries must lie in 1..r");
      if (i && sorted[i] == sorted[i - 1]) throw std::invalid_argument("idx entries must be distinct");
    }
    break;
  }
  }
}

std::vector<Level> family_levels(const FamilySpec &spec, i64 X) {
  spec.validate();
  if (X < 1) throw std::invalid_argument("X must be positive");
  i64 hi = window_top(X, spec.beta);
  std::vector<Level> out;
  for (i64 N = X; N <= hi; ++N) {
    Level lv;
    lv.N = N;
    switch (spec.type) {
    case FamilyType::I: {
      if (N % spec.M) continue;
      i64 Q = N / spec.M;
      if (std::gcd(Q, spec.M) != 1) continue;
      FactoredInt qf = factor(Q);
      if (!is_squarefree(qf)) continue;
      if (spec.omega && omega(qf) != *spec.omega) continue;
      lv.Q = Q;
      break;
    }
    case FamilyType::II: {
      if (N % spec.Q) continue;
      i64 M = N / spec.Q;
      if (std::gcd(M, spec.Q) != 1) continue;
      if (spec.m_range != MRange::all) {
        FactoredInt mf = factor(M);
        if (!is_squarefree(mf)) continue;
        if (spec.m_range == MRange::squarefree_r && omega(mf) != spec.m_omega) continue;
      }
      lv.Q = spec.Q;
      break;
    }
    case FamilyType::III: {
      FactoredInt nf = factor(N);
      if (!is_squarefree(nf) || omega(nf) != spec.r) continue;
      bool ok = true;
      for (std::size_t i = 0; i < spec.fixed.size(); ++i)
        if (nf.factors[i].first != spec.fixed[i]) ok = false;
      if (!ok) continue;
      for (auto [p, e] : nf.factors) lv.primes.push_back(p);
      lv.Q = 1;
      for (int i : spec.idx) lv.Q *= lv.primes[i - 1];
      break;
    }
    }
    lv.Nf = factor(N);
    out.push_back(std::move(lv));
  }
  return out;
}

i64 level_trace(int k, const Level &level, i64 ell) {
  if (std::gcd(level.N, ell) != 1) throw std::invalid_argument("ell must be coprime to the level");
  i64 M = level.N / level.Q;
  if (is_squarefree(level.Nf)) return sqf_trace(k, level.Q, M, ell);
  TraceQuery q{k, level.Q, ell};
  if (level.Q == 1) {
    // W_1 is the identity; any prime away from N ell serves as the q slot.
    q.q = 2;
    while (!is_prime(q.q) || level.N % q.q == 0 || ell % q.q == 0) ++q.q;
    return t_new_int(0, M, q);
  }
  if (!is_prime(level.Q)) throw std::invalid_argument("non-squarefree levels need Q = 1 or Q prime");
  return t_new_int(1, M, q);
}

std::vector<MurmurationPoint> scan_WQ(const FamilySpec &spec, i64 X, const ScanOptions &opt) {
  auto levels = family_levels(spec, X);
  if (levels.empty()) throw std::invalid_argument("empty window: no levels of " + spec.encode() + " in [X, beta X]");
  if (opt.include_ell_dividing_N)
    for (auto &lv : levels)
      if (!is_squarefree(lv.Nf)) throw std::invalid_argument("levels divisible by ell need squarefree levels");
  const int k = spec.k;
  std::vector<i64> dims(levels.size());
  std::vector<long double> weight(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    dims[i] = newspace_dim(k, levels[i].Nf);
    weight[i] = std::sqrt(static_cast<long double>(levels[i].N / levels[i].Q));
  }
  auto primes = scan_primes(spec, X, opt);
  std::vector<MurmurationPoint> out(primes.size());
  std::vector<char> keep(primes.size(), 1);
  parallel_for(primes.size(), opt.workers, [&](std::size_t j) {
    const i64 ell = primes[j];
    i128 coprime_exact = 0, dividing_exact = 0;
    long double coprime_w = 0, dividing_w = 0;
    i64 den = 0;
    bool any = false;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const Level &lv = levels[i];
      if (lv.N % ell == 0) {
        if (!opt.include_ell_dividing_N) continue;
        // a_ell = -ell^{k/2-1} w_ell on newforms with ell || N.
        i64 Qp = lv.Q % ell == 0 ? lv.Q / ell : lv.Q * ell;
        i64 t = -sqf_trace(k, Qp, lv.N / Qp, 1);
        dividing_exact += t;
        dividing_w += weight[i] * t;
      } else {
        i64 t = level_trace(k, lv, ell);
        coprime_exact += t;
        coprime_w += weight[i] * t;
        any = true;
      }
      den += dims[i];
    }
    if (!any && !opt.include_ell_dividing_N) {
      keep[j] = 0;
      return;
    }
    if (den == 0) throw std::invalid_argument("no forms in window for ell = " + std::to_string(ell));
    long double num;
    if (spec.type == FamilyType::I) {
      num = std::sqrt(static_cast<long double>(spec.M)) *
            (ell_scale(ell, k) * static_cast<long double>(coprime_exact) + static_cast<long double>(dividing_exact));
    } else {
      num = ell_scale(ell, k) * coprime_w + dividing_w;
    }
    out[j] = MurmurationPoint{ell, X, static_cast<double>(ell) / X, static_cast<double>(num / den), den, 1, false};
  });
  std::vector<MurmurationPoint> kept;
  for (std::size_t j = 0; j < out.size(); ++j)
    if (keep[j]) kept.push_back(out[j]);
  if (kept.empty()) throw std::invalid_argument("every scanned ell divides all levels in the window");
  return kept;
}

std::vector<i64> eigenspace_traces(int k, const Level &level, i64 ell) {
  if (!is_squarefree(level.Nf)) throw std::invalid_argument("eigenspace traces need a squarefree level");
  std::vector<i64> ps;
  for (auto [p, e] : level.Nf.factors) ps.push_back(p);
  const int r = static_cast<int>(ps.size());
  const std::size_t n = std::size_t{1} << r;
  std::vector<i64> tq(n);
  for (std::size_t I = 0; I < n; ++I) {
    i64 Q = 1;
    for (int i = 0; i < r; ++i)
      if (I >> i & 1) Q *= ps[i];
    tq[I] = sqf_trace(k, Q, level.N / Q, ell);
  }
  std::vector<i64> out(n);
  for (std::size_t E = 0; E < n; ++E) {
    i128 s = 0;
    for (std::size_t I = 0; I < n; ++I) s += (std::popcount(I & E) & 1) ? -tq[I] : tq[I];
    if (s % static_cast<i128>(n) != 0)
      throw std::logic_error("eigenspace trace not integral at N = " + std::to_string(level.N) +
                             ", ell = " + std::to_string(ell));
    out[E] = static_cast<i64>(s / static_cast<i128>(n));
  }
  return out;
}

namespace {
std::size_t sign_mask(const std::vector<int> &epsilon, int r) {
  if (static_cast<int>(epsilon.size()) != r)
    throw std::invalid_argument("sign vector length must equal r = " + std::to_string(r));
  std::size_t E = 0;
  for (int i = 0; i < r; ++i) {
    if (epsilon[i] != 1 && epsilon[i] != -1) throw std::invalid_argument("signs must be +1 or -1");
    if (epsilon[i] == -1) E |= std::size_t{1} << i;
  }
  return E;
}
} // namespace

std::vector<MurmurationPoint> scan_eigenspace(const FamilySpec &spec, const std::vector<int> &epsilon, i64 X,
                                              const ScanOptions &opt) {
  if (spec.type != FamilyType::III) throw std::invalid_argument("eigenspace scans need a Type III family");
  const std::size_t E = sign_mask(epsilon, spec.r);
  auto levels = family_levels(spec, X);
  if (levels.empty()) throw std::invalid_argument("empty window: no levels of " + spec.encode() + " in [X, beta X]");
  std::vector<i64> dims(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) dims[i] = eigenspace_traces(spec.k, levels[i], 1)[E];
  auto primes = scan_primes(spec, X, opt);
  std::vector<MurmurationPoint> out(primes.size());
  parallel_for(primes.size(), opt.workers, [&](std::size_t j) {
    const i64 ell = primes[j];
    i128 num = 0;
    i64 den = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (levels[i].N % ell == 0) continue;
      num += eigenspace_traces(spec.k, levels[i], ell)[E];
      den += dims[i];
    }
    if (den == 0) throw std::invalid_argument("empty eigenspace in window for ell = " + std::to_string(ell));
    long double avg = ell_scale(ell, spec.k) * static_cast<long double>(num) / den;
    out[j] = MurmurationPoint{ell, X, static_cast<double>(ell) / X, static_cast<double>(avg), den, 1, false};
  });
  return out;
}

InversionReport check_eigenspace_inversion(const FamilySpec &spec, i64 X, const std::vector<i64> &ells) {
  if (spec.type != FamilyType::III) throw std::invalid_argument("inversion check needs a Type III family");
  InversionReport rep;
  auto fail = [&](const std::string &what) {
    ++rep.failures;
    if (rep.first_failure.empty()) rep.first_failure = what;
  };
  for (const Level &lv : family_levels(spec, X)) {
    ++rep.levels;
    std::vector<i64> list{1};
    for (i64 l : ells)
      if (std::gcd(l, lv.N) == 1) list.push_back(l);
    const int r = static_cast<int>(lv.Nf.factors.size());
    const std::size_t n = std::size_t{1} << r;
    for (i64 ell : list) {
      ++rep.checks;
      std::string where = "N = " + std::to_string(lv.N) + ", ell = " + std::to_string(ell);
      std::vector<i64> eig;
      try {
        eig = eigenspace_traces(spec.k, lv, ell);
      } catch (const std::logic_error &e) {
        fail(e.what());
        continue;
      }
      for (std::size_t I = 0; I < n; ++I) {
        i64 Q = 1;
        for (int i = 0; i < r; ++i)
          if (I >> i & 1) Q *= lv.Nf.factors[i].first;
        i64 back = 0;
        for (std::size_t Em = 0; Em < n; ++Em) back += (std::popcount(I & Em) & 1) ? -eig[Em] : eig[Em];
        if (back != sqf_trace(spec.k, Q, lv.N / Q, ell)) fail("W_" + std::to_string(Q) + " mismatch at " + where);
      }
      if (ell == 1) {
        i64 total = 0;
        for (i64 d : eig) {
          if (d < 0) fail("negative eigenspace dimension at " + where);
          total += d;
        }
        if (total != newspace_dim(spec.k, lv.Nf)) fail("eigenspace dimensions do not sum to dim at " + where);
      }
    }
  }
  return rep;
}

double type3_c_weight(const FamilySpec &spec, const std::vector<int> &subset, i64 X) {
  if (spec.type != FamilyType::III) throw std::invalid_argument("c weights are defined for Type III families");
  double c = 0;
  for (const Level &lv : family_levels(spec, X)) {
    i64 Q = 1;
    for (int i : subset) {
      if (i < 1 || i > spec.r) throw std::invalid_argument("subset entries must lie in 1..r");
      Q *= lv.primes[i - 1];
    }
    c += std::sqrt(static_cast<double>(Q) / static_cast<double>(lv.N));
  }
  return c;
}

std::vector<MurmurationPoint> smooth(const std::vector<MurmurationPoint> &points, double delta) {
  if (!(delta > 0 && delta < 1)) throw std::invalid_argument("delta must lie in (0, 1)");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].ell <= points[i - 1].ell) throw std::invalid_argument("points must be sorted by ell");
  std::vector<MurmurationPoint> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double end = points[i].ell + std::pow(static_cast<double>(points[i].ell), delta);
    double sum = 0;
    std::size_t j = i;
    for (; j < points.size() && points[j].ell < end; ++j) sum += points[j].average;
    MurmurationPoint p = points[i];
    p.window = static_cast<int>(j - i);
    p.average = sum / p.window;
    if (j == points.size()) {
      i64 next = points.back().ell + 1;
      while (!is_prime(next)) ++next;
      p.truncated = next < end;
    }
    out.push_back(p);
  }
  return out;
}

SqrtFit sqrt_fit(const std::vector<MurmurationPoint> &points, double x_max, FitShape shape) {
  std::vector<double> u, g, y;
  for (auto &p : points)
    if (p.x < x_max) {
      u.push_back(std::sqrt(p.x));
      g.push_back(shape == FitShape::sqrt_plus_linear ? p.x : 1.0);
      y.push_back(p.average);
    }
  if (u.size() < 8)
    throw std::invalid_argument("sqrt fit needs at least 8 points with x < " + format_g12(x_max) + ", have " +
                                std::to_string(u.size()));
  double suu = 0, sug = 0, sgg = 0, suy = 0, sgy = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += u[i] * u[i];
    sug += u[i] * g[i];
    sgg += g[i] * g[i];
    suy += u[i] * y[i];
    sgy += g[i] * y[i];
  }
  SqrtFit f;
  f.n = static_cast<int>(u.size());
  if (shape == FitShape::sqrt_only) {
    f.c = suy / suu;
  } else {
    double det = suu * sgg - sug * sug;
    f.c = (suy * sgg - sgy * sug) / det;
    f.d = (sgy * suu - suy * sug) / det;
  }
  double ss = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double e = y[i] - (f.c * u[i] + (shape == FitShape::sqrt_only ? 0.0 : f.d * g[i]));
    ss += e * e;
  }
  f.rms = std::sqrt(ss / f.n);
  auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  f.range = *hi - *lo;
  f.relative_rms = f.range > 0 ? f.rms / f.range : 0;
  return f;
}

CancellationReport cancellation_diag(int k, i64 X, Rational beta, int workers) {
  FamilySpec spec;
  spec.type = FamilyType::II;
  spec.k = k;
  spec.beta = beta;
  spec.Q = 1;
  spec.m_range = MRange::squarefree;
  auto levels = family_levels(spec, X);
  if (levels.empty()) throw std::invalid_argument("empty window");
  const i64 sgn = (k / 2) % 2 == 0 ? 1 : -1;
  std::vector<i64> dims(levels.size()), fricke(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    dims[i] = newspace_dim(k, levels[i].Nf);
    fricke[i] = sqf_trace(k, levels[i].N, 1, 1);
  }
  std::vector<i64> primes;
  for (i64 p : primes_up_to(2 * X))
    if (2 * p >= X) primes.push_back(p);
  CancellationReport rep;
  rep.points.resize(primes.size());
  parallel_for(primes.size(), workers, [&](std::size_t j) {
    const i64 ell = primes[j];
    i128 s_plus = 0, s_minus = 0, c_plus = 0, c_minus = 0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const Level &lv = levels[i];
      if (lv.N % ell == 0) continue;
      i64 t = sqf_trace(k, 1, lv.N, ell);
      i64 tw = sgn * sqf_trace(k, lv.N, 1, ell);
      s_plus += t + tw;
      s_minus += t - tw;
      c_plus += dims[i] + sgn * fricke[i];
      c_minus += dims[i] - sgn * fricke[i];
    }
    // The 1/2 factors cancel between numerators and counts.
    long double sc = ell_scale(ell, k);
    RootNumberAverages a;
    a.ell = ell;
    a.count_plus = static_cast<i64>(c_plus / 2);
    a.count_minus = static_cast<i64>(c_minus / 2);
    a.plus = static_cast<double>(sc * static_cast<long double>(s_plus) / static_cast<long double>(c_plus));
    a.minus = static_cast<double>(sc * static_cast<long double>(s_minus) / static_cast<long double>(c_minus));
    rep.points[j] = a;
  });
  for (auto &a : rep.points) {
    rep.max_sum = std::max(rep.max_sum, std::abs(a.plus + a.minus));
    rep.max_diff = std::max(rep.max_diff, std::abs(a.plus - a.minus));
  }
  rep.ratio = rep.max_diff > 0 ? rep.max_sum / rep.max_diff : 0;
  return rep;
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const std::vector<Series> &series, const std::string &path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "family,k,beta,X,ell,x,avg,count\n";
  for (auto &s : series)
    for (auto &p : s.points)
      os << '"' << s.family << "\"," << s.k << ',' << s.beta.str() << ',' << p.X << ',' << p.ell << ','
         << format_g12(p.x) << ',' << format_g12(p.average) << ',' << p.count << '\n';
  if (!os) throw std::runtime_error("write failed for " + path);
}

std::vector<CsvRow> read_csv(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path + " for reading");
  std::string line;
  if (!std::getline(is, line) || line != "family,k,beta,X,ell,x,avg,count")
    throw std::runtime_error(path + ": missing or unexpected CSV header");
  std::vector<CsvRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::string where = path + ":" + std::to_string(lineno);
    CsvRow row;
    std::string rest;
    if (line[0] == '"') {
      auto close = line.find('"', 1);
      if (close == std::string::npos || close + 1 >= line.size() || line[close + 1] != ',')
        throw std::runtime_error(where + ": unterminated family field");
      row.family = line.substr(1, close - 1);
      rest = line.substr(close + 2);
    } else {
      auto comma = line.find(',');
      if (comma == std::string::npos) throw std::runtime_error(where + ": too few fields");
      row.family = line.substr(0, comma);
      rest = line.substr(comma + 1);
    }
    auto f = split(rest, ',');
    if (f.size() != 7) throw std::runtime_error(where + ": expected 8 fields");
    try {
      row.k = static_cast<int>(parse_int(f[0], "k"));
      row.beta = Rational::parse(f[1]);
      row.X = parse_int(f[2], "X");
      row.ell = parse_int(f[3], "ell");
      row.x = std::stod(f[4]);
      row.avg = std::stod(f[5]);
      row.count = parse_int(f[6], "count");
    } catch (const std::exception &e) {
      throw std::runtime_error(where + ": " + e.what());
    }
    rows.push_back(row);
  }
  return rows;
}

void write_svg(const std::vector<Series> &series, const std::string &path, const std::string &title) {
  static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};
  const double W = 800, H = 500, L = 70, R = 20, T = 40, B = 60;
  double xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (auto &s : series)
    for (auto &p : s.points) {
      xmax = std::max(xmax, p.x);
      if (first) ymin = ymax = p.average, first = false;
      ymin = std::min(ymin, p.average);
      ymax = std::max(ymax, p.average);
    }
  if (xmax <= 0) xmax = 1;
  if (ymax <= ymin) ymin -= 1, ymax += 1;
  auto sx = [&](double x) { return L + (W - L - R) * x / xmax; };
  auto sy = [&](double y) { return H - B - (H - T - B) * (y - ymin) / (ymax - ymin); };

  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  if (ymin < 0 && ymax > 0)
    os << "<line x1=\"" << L << "\" y1=\"" << sy(0) << "\" x2=\"" << W - R << "\" y2=\"" << sy(0)
       << "\" stroke=\"#999\" stroke-dasharray=\"4\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double xv = xmax * i / 4, yv = ymin + (ymax - ymin) * i / 4;
    os << "<text x=\"" << sx(xv) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
       << format_g12(std::round(xv * 1000) / 1000) << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
       << format_g12(std::round(yv * 1000) / 1000) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\" font-size=\"13\">ell/X</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char *col = palette[i % 6];
    os << "<g fill=\"" << col << "\">\n";
    for (auto &p : series[i].points)
      os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.average) << "\" r=\"2\"/>\n";
    os << "</g>\n";
    std::string name = series[i].label.empty() ? series[i].family : series[i].label;
    os << "<text x=\"" << W - R - 10 << "\" y=\"" << T + 16 * (i + 1) << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
       << col << "\">" << name << "</text>\n";
  }
  os << "</svg>\n";
  if (!os) throw std::runtime_error("write failed for " + path);
}

} // namespace alsigns

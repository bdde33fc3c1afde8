#include "alsigns/acceptance.hpp"
#include "alsigns/arith.hpp"
#include "alsigns/classnum.hpp"
#include "alsigns/murmur.hpp"
#include "alsigns/parallel.hpp"
#include "alsigns/signs.hpp"
#include "alsigns/trace.hpp"
#include "alsigns/twist.hpp"
#include "runtime.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <numeric>

using namespace alsigns;
using Json = nlohmann::ordered_json;

namespace {

struct Config {
  i64 sieve_bound = kDefaultSieveBound;
  std::string cache_path;
  int workers = 1;
  std::string output_dir = ".";
  std::uint64_t seed = 20240611;
  bool json = false;
};

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Json jr(const Rational &r) {
  if (r.is_integer()) return r.num();
  return r.str();
}

std::string scalar_text(const Json &v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Plain-text rendering of the same document the --json mode prints.
void print_plain(const Json &j, const std::string &prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const Json &v = it.value();
    if (v.is_object()) {
      print_plain(v, key);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      std::cout << key << ":\n";
      for (const Json &row : v) {
        std::cout << " ";
        for (auto c = row.begin(); c != row.end(); ++c) std::cout << " " << c.key() << "=" << scalar_text(c.value());
        std::cout << "\n";
      }
    } else if (v.is_array()) {
      std::cout << key << ":";
      for (const Json &e : v) std::cout << " " << scalar_text(e);
      std::cout << "\n";
    } else {
      std::cout << key << ": " << scalar_text(v) << "\n";
    }
  }
}

void emit(const Config &cfg, const Json &doc) {
  if (cfg.json)
    std::cout << doc.dump(2) << "\n";
  else
    print_plain(doc);
}

void table(const Config &cfg, i64 need = 0) {
  i64 bound = std::max(cfg.sieve_bound, std::min<i64>(need, 20'000'000));
  std::string path = cfg.cache_path.empty() ? tools::default_cache_path(bound) : cfg.cache_path;
  tools::install_table(bound, path, cfg.workers);
}

Json verdict_json(const PredicateVerdict &v) {
  Json j;
  j["covered"] = v.covered;
  j["tag"] = v.tag;
  j["zero"] = v.zero;
  j["sign"] = v.sign ? Json(*v.sign) : Json(nullptr);
  j["reason"] = to_string(v.reason);
  return j;
}

int cmd_classnum(const Config &cfg, i64 d) {
  if (!is_discriminant(d)) throw UsageError("delta must be <= 0 and congruent to 0 or 1 mod 4");
  Json j;
  j["delta"] = d;
  if (d == 0) {
    j["H"] = jr(hurwitz(0));
    emit(cfg, j);
    return 0;
  }
  Discriminant disc = Discriminant::make(d);
  j["fundamental"] = disc.fundamental;
  j["conductor"] = disc.conductor;
  j["h_prime"] = jr(h_prime(d));
  Rational H = hurwitz(d);
  j["H"] = jr(H);
  bool agree = true;
  if (-d <= default_oracle_bound()) {
    Rational o = hurwitz_oracle(d);
    j["oracle"] = jr(o);
    agree = o == H;
    j["agree"] = agree;
  } else {
    j["oracle"] = nullptr;
  }
  emit(cfg, j);
  return agree ? 0 : 1;
}

struct TraceArgs {
  int k = 2;
  i64 q = 2;
  int r = 1;
  i64 M = 1;
  i64 ell = 1;
  i64 squarefree_Q = 0;
};

int cmd_trace(const Config &cfg, const TraceArgs &a) {
  FactoredInt F = factor(a.M);
  TraceQuery tq{a.k, a.q, a.ell};
  try {
    tq.validate(F);
  } catch (const std::invalid_argument &e) {
    throw UsageError(e.what());
  }
  if (a.r < 0) throw UsageError("r must be nonnegative");
  table(cfg);
  Json j;
  j["k"] = a.k;
  j["q"] = a.q;
  j["r"] = a.r;
  j["M"] = a.M;
  j["ell"] = a.ell;
  Rational full = t_full(a.r, F, tq), nw = t_new(a.r, F, tq);
  j["t_full"] = jr(full);
  j["t_new"] = jr(nw);
  bool mismatch = false;
  const i64 N = checked_mul(ipow(a.q, a.r), a.M);
  const bool sqf = is_squarefree(factor(N));
  if (a.squarefree_Q || (a.r == 1 && sqf)) {
    i64 Q = a.squarefree_Q ? a.squarefree_Q : a.q;
    if (!sqf) throw UsageError("--squarefree-Q needs a squarefree level q^r M");
    if (Q < 1 || N % Q) throw UsageError("--squarefree-Q must divide q^r M");
    Rational s = t_new_squarefree({a.k, Q, N / Q, a.ell});
    j["squarefree_Q"] = Q;
    j["t_new_squarefree"] = jr(s);
    if (Q == a.q && a.r == 1) {
      j["t_new_squarefree_agrees"] = s == nw;
      mismatch = mismatch || s != nw;
    }
  }
  if (a.M == 1 && a.r == 1 && 4 * a.ell < a.q) {
    Rational f = t_full_fricke(a.k, a.q, a.ell);
    j["t_full_fricke"] = jr(f);
    j["t_full_fricke_agrees"] = f == full;
    mismatch = mismatch || f != full;
  }
  j["mismatch"] = mismatch;
  emit(cfg, j);
  return mismatch ? 1 : 0;
}

int cmd_delta(const Config &cfg, int k, i64 q, int r, i64 M) {
  if (k < 2 || k % 2) throw UsageError("k must be even and at least 2");
  if (!is_prime(q)) throw UsageError("q must be prime");
  if (r < 1) throw UsageError("r must be at least 1");
  if (M < 1 || std::gcd(q, M) != 1) throw UsageError("M must be positive and coprime to q");
  table(cfg);
  FactoredInt F = factor(M);
  DeltaResult d = delta(k, q, r, F);
  EigenspaceDims e = eigenspace_dims(k, q, r, F);
  Rational pipe = t_new(r, F, TraceQuery{k, q, 1});
  Json j;
  j["k"] = k;
  j["q"] = q;
  j["r"] = r;
  j["M"] = M;
  j["delta"] = d.value;
  j["dim_new"] = newspace_dim(k, multiply(F, factor(ipow(q, r))));
  j["dim_plus"] = e.plus;
  j["dim_minus"] = e.minus;
  j["t_new"] = jr(pipe);
  j["two_path_agree"] = pipe == Rational(d.value);
  j["verdict"] = verdict_json(d.verdict);
  bool verdict_ok = !d.verdict.covered ||
                    (d.verdict.zero == (d.value == 0) && (!d.verdict.sign || d.value == 0 || *d.verdict.sign == sign_of(d.value)));
  j["verdict_agrees"] = verdict_ok;
  emit(cfg, j);
  return pipe == Rational(d.value) && verdict_ok ? 0 : 1;
}

int cmd_sweep(const Config &cfg, const std::string &k_range, i64 qr_max, i64 m_max) {
  auto colon = k_range.find(':');
  int k0, k1;
  try {
    k0 = std::stoi(k_range.substr(0, colon));
    k1 = colon == std::string::npos ? k0 : std::stoi(k_range.substr(colon + 1));
  } catch (const std::exception &) {
    throw UsageError("--k-range must look like 2:14");
  }
  if (k0 < 2 || k1 < k0) throw UsageError("--k-range needs 2 <= kmin <= kmax");
  if (qr_max < 2 || m_max < 1) throw UsageError("--qr-max must be >= 2 and --M-max >= 1");
  table(cfg);
  SweepReport rep = equidist_sweep(k0, k1, qr_max, m_max, cfg.workers);
  Json j;
  j["k_range"] = k_range;
  j["qr_max"] = qr_max;
  j["M_max"] = m_max;
  j["points"] = rep.points;
  j["path_mismatches"] = rep.path_mismatches;
  j["covered"] = rep.covered;
  j["zero_mismatches"] = rep.zero_mismatches;
  j["signed_verdicts"] = rep.signed_verdicts;
  j["sign_mismatches"] = rep.sign_mismatches;
  j["first_mismatch"] = rep.first_mismatch;
  j["seconds"] = rep.seconds;
  emit(cfg, j);
  return rep.ok() ? 0 : 1;
}

struct MurmurArgs {
  std::string family;
  int k = 2;
  i64 X = 500;
  std::string beta = "2";
  i64 ell_min = 2;
  i64 ell_max = 0;
  std::optional<double> smooth;
  std::string eigenspace;
  bool fit = false;
  std::optional<double> fit_xmax;
  bool include_dividing = false;
  std::string name = "murmur";
};

Json points_json(const std::vector<MurmurationPoint> &pts) {
  Json arr = Json::array();
  for (auto &p : pts) {
    Json row;
    row["ell"] = p.ell;
    row["x"] = format_g12(p.x);
    row["avg"] = format_g12(p.average);
    row["count"] = p.count;
    if (p.window != 1 || p.truncated) {
      row["window"] = p.window;
      row["truncated"] = p.truncated;
    }
    arr.push_back(row);
  }
  return arr;
}

int cmd_murmur(const Config &cfg, const MurmurArgs &a) {
  FamilySpec spec;
  Rational beta;
  try {
    beta = Rational::parse(a.beta);
    spec = FamilySpec::parse(a.family, a.k, beta);
  } catch (const std::exception &e) {
    throw UsageError(e.what());
  }
  if (a.X < 1) throw UsageError("--X must be positive");
  if (a.smooth && !(*a.smooth > 0 && *a.smooth < 1)) throw UsageError("--smooth needs 0 < delta < 1");
  if (!a.eigenspace.empty() && spec.type != FamilyType::III) throw UsageError("--eigenspace needs a Type III family");
  if (a.fit && spec.type != FamilyType::I) throw UsageError("--fit applies to Type I families");
  if (a.include_dividing && !a.eigenspace.empty()) throw UsageError("--include-ell-dividing applies to W_Q scans");

  ScanOptions so;
  so.ell_min = a.ell_min;
  so.ell_max = a.ell_max > 0 ? a.ell_max : 4 * a.X;
  so.include_ell_dividing_N = a.include_dividing;
  so.workers = cfg.workers;
  i64 top = static_cast<i64>(static_cast<i128>(beta.num()) * a.X / beta.den());
  table(cfg, checked_mul(4 * top, so.ell_max));

  Series raw{spec.encode(), "raw", spec.k, beta, {}};
  if (!a.eigenspace.empty()) {
    std::vector<int> eps;
    for (char c : a.eigenspace) {
      if (c != '+' && c != '-') throw UsageError("--eigenspace takes a string of + and - signs");
      eps.push_back(c == '+' ? 1 : -1);
    }
    if (static_cast<int>(eps.size()) != spec.r) throw UsageError("--eigenspace needs exactly r signs");
    raw.points = scan_eigenspace(spec, eps, a.X, so);
    raw.family += ";eps=" + a.eigenspace;
    raw.label = "eps " + a.eigenspace;
  } else {
    raw.points = scan_WQ(spec, a.X, so);
  }
  std::vector<Series> series{raw};
  if (a.smooth) series.push_back(Series{raw.family + ";delta=" + format_g12(*a.smooth),
                                        "smoothed delta=" + format_g12(*a.smooth), spec.k, beta,
                                        smooth(raw.points, *a.smooth)});

  std::filesystem::create_directories(cfg.output_dir);
  std::string stem = (std::filesystem::path(cfg.output_dir) / a.name).string();
  write_csv(series, stem + ".csv");
  write_svg(series, stem + ".svg", raw.family + ", k=" + std::to_string(spec.k) + ", X=" + std::to_string(a.X));

  Json j;
  j["family"] = spec.encode();
  j["k"] = spec.k;
  j["beta"] = beta.str();
  j["X"] = a.X;
  j["csv"] = stem + ".csv";
  j["svg"] = stem + ".svg";
  if (a.fit) {
    double xmax = a.fit_xmax ? *a.fit_xmax : 1.0 / (4.0 * spec.M) - 0.02;
    auto f = sqrt_fit(raw.points, xmax, spec.k == 2 ? FitShape::sqrt_plus_constant : FitShape::sqrt_only);
    Json fj;
    fj["x_max"] = format_g12(xmax);
    fj["n"] = f.n;
    fj["c"] = format_g12(f.c);
    fj["d"] = format_g12(f.d);
    fj["relative_rms"] = format_g12(f.relative_rms);
    if (spec.k == 2) {
      auto g = sqrt_fit(raw.points, xmax, FitShape::sqrt_plus_linear);
      fj["linear_term_relative_rms"] = format_g12(g.relative_rms);
    }
    j["fit"] = fj;
  }
  j["points"] = points_json(raw.points);
  if (a.smooth) j["smoothed"] = points_json(series[1].points);
  emit(cfg, j);
  return 0;
}

int cmd_twist(const Config &cfg, int k, i64 q, int r, i64 M, i64 ell_max) {
  if (k < 2 || k % 2) throw UsageError("k must be even and at least 2");
  if (!is_prime(q)) throw UsageError("q must be prime");
  if (r < 1) throw UsageError("r must be at least 1");
  if (M < 1 || std::gcd(q, M) != 1) throw UsageError("M must be positive and coprime to q");
  table(cfg);
  Json j;
  j["k"] = k;
  j["q"] = q;
  j["r"] = r;
  j["M"] = M;
  Json types = Json::array();
  for (auto t : classify_local_types(q, r)) types.push_back(to_string(t));
  j["local_types"] = types;

  std::vector<TwistCharacter> chars;
  for (i64 p : primes_up_to(13))
    if (p != 2 && p != q) chars.push_back(TwistCharacter::odd(p));
  if (q != 2)
    for (auto c : {TwistCharacter::chi_minus_one(), TwistCharacter::chi_two(), TwistCharacter::chi_minus_two()})
      chars.push_back(c);
  Json away;
  for (auto &c : chars) away[c.name()] = kappa_away(q, r, c);
  j["kappa_away"] = away;

  if (q != 2 && r >= 3) {
    Json at;
    for (auto t : classify_local_types(q, r)) {
      if (t == LocalRepType::ramified_supercuspidal) {
        at[to_string(t) + "/sqrt(q*)"] = kappa_at_q(q, r, t, RamifiedBranch::sqrt_q_star);
        at[to_string(t) + "/sqrt(-q*)"] = kappa_at_q(q, r, t, RamifiedBranch::sqrt_minus_q_star);
      } else {
        at[to_string(t)] = kappa_at_q(q, r, t);
      }
    }
    j["kappa_at_q"] = at;
    j["chi_q_flips_every_type"] = twist_at_q_flips_every_type(q, r);
  }

  int rc = 0;
  if (r % 2 == 1) {
    FactoredInt F = factor(M);
    auto chi = quadtwist_bijection(k, q, r, F);
    j["quadtwist"] = chi ? Json(chi->name()) : Json(nullptr);
    if (chi) {
      i64 d = delta(k, q, r, F).value;
      j["delta"] = d;
      std::vector<TwistCharacter> check{*chi};
      if (chi->kind == TwistCharacter::Kind::two) check.push_back(TwistCharacter::chi_minus_two());
      i64 n = 0, nonzero = 0;
      for (auto &c : check)
        for (i64 ell = 1; ell <= ell_max; ++ell) {
          if (std::gcd(ell, q * M) != 1 || c(ell) != 1) continue;
          ++n;
          if (!t_new(r, F, TraceQuery{k, q, ell}).is_zero()) ++nonzero;
        }
      j["traces_checked"] = n;
      j["traces_nonzero"] = nonzero;
      if (d != 0 || nonzero) rc = 1;
    }
  } else {
    j["quadtwist"] = nullptr;
  }
  emit(cfg, j);
  return rc;
}

int cmd_selftest(const Config &cfg, const std::vector<int> &only) {
  table(cfg);
  AcceptanceOptions opt;
  opt.workers = cfg.workers;
  opt.seed = cfg.seed;
  opt.only.insert(only.begin(), only.end());
  Json arr = Json::array();
  bool all = true;
  run_acceptance(opt, [&](const CriterionResult &r) {
    all = all && r.pass;
    if (cfg.json) {
      Json row;
      row["id"] = r.id;
      row["name"] = r.name;
      row["pass"] = r.pass;
      row["seconds"] = r.seconds;
      row["detail"] = r.detail;
      arr.push_back(row);
    } else {
      std::cout << format_result(r) << std::endl;
    }
  });
  if (cfg.json) {
    Json j;
    j["criteria"] = arr;
    j["all_pass"] = all;
    std::cout << j.dump(2) << "\n";
  }
  return all ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Atkin-Lehner sign statistics: class numbers, traces, Delta_k, twists and murmurations."};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  cfg.workers = default_workers();
  app.add_option("--sieve-bound", cfg.sieve_bound, "Hurwitz table bound")->check(CLI::Range(i64{4}, i64{200'000'000}));
  app.add_option("--cache", cfg.cache_path,
                 std::string("Hurwitz table cache path or 'none' (env ") + tools::kCacheEnv + ")");
  app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", cfg.output_dir, "directory for CSV and SVG output");
  app.add_option("--seed", cfg.seed, "seed for sampled checks");
  app.add_flag("--json", cfg.json, "machine-readable output");

  std::function<int()> run;

  i64 disc = 0;
  auto *cn = app.add_subcommand("classnum", "h', H and the reduced-form oracle for a discriminant");
  cn->add_option("delta", disc, "discriminant <= 0")->required()->allow_extra_args(false);
  cn->callback([&] { run = [&] { return cmd_classnum(cfg, disc); }; });

  TraceArgs ta;
  auto *tr = app.add_subcommand("trace", "trace of T_ell W_q on S_k(q^r M) along every applicable path");
  tr->add_option("--k", ta.k)->required();
  tr->add_option("--q", ta.q)->required();
  tr->add_option("--r", ta.r)->required();
  tr->add_option("--M", ta.M)->required();
  tr->add_option("--ell", ta.ell)->required();
  tr->add_option("--squarefree-Q", ta.squarefree_Q, "evaluate the squarefree formula with this Q");
  tr->callback([&] { run = [&] { return cmd_trace(cfg, ta); }; });

  int dk = 2, dr = 1;
  i64 dq = 2, dM = 1;
  auto *de = app.add_subcommand("delta", "Delta_k(q^r, M), eigenspace dimensions and the predicate verdict");
  de->add_option("--k", dk)->required();
  de->add_option("--q", dq)->required();
  de->add_option("--r", dr)->required();
  de->add_option("--M", dM)->required();
  de->callback([&] { run = [&] { return cmd_delta(cfg, dk, dq, dr, dM); }; });

  std::string k_range = "2:14";
  i64 qr_max = 200, m_max = 300;
  auto *sw = app.add_subcommand("equidist-sweep", "two-path and predicate grid; exits nonzero on any mismatch");
  sw->add_option("--k-range", k_range, "even weights kmin:kmax");
  sw->add_option("--qr-max", qr_max);
  sw->add_option("--M-max", m_max);
  sw->callback([&] { run = [&] { return cmd_sweep(cfg, k_range, qr_max, m_max); }; });

  MurmurArgs ma;
  auto *mu = app.add_subcommand(
      "murmur", "murmuration scans with CSV/SVG output\n"
                "families: I:M=<m>[,omega=<r>]  II:Q=<q>,M=<N|sqf|sqf_<r>>  III:r=<r>,fixed=<p1,...>,idx=<i1,...>");
  mu->add_option("--family", ma.family)->required();
  mu->add_option("--k", ma.k);
  mu->add_option("--X", ma.X)->required();
  mu->add_option("--beta", ma.beta, "window ratio, rational > 1");
  mu->add_option("--ell-min", ma.ell_min);
  mu->add_option("--ell-max", ma.ell_max, "largest prime scanned (default 4X)");
  mu->add_option("--smooth", ma.smooth, "delta for prime-window smoothing, e.g. 0.5 or 0.75");
  mu->add_option("--eigenspace", ma.eigenspace, "Atkin-Lehner signs such as +- (Type III)");
  mu->add_flag("--fit", ma.fit, "fit c sqrt(x) (+ d when k = 2) for Type I");
  mu->add_option("--fit-xmax", ma.fit_xmax, "fit range x < value (default 1/(4M) - 0.02)");
  mu->add_flag("--include-ell-dividing", ma.include_dividing, "also average over levels divisible by ell");
  mu->add_option("--name", ma.name, "output file stem");
  mu->callback([&] { run = [&] { return cmd_murmur(cfg, ma); }; });

  int tk = 2, trr = 1;
  i64 tq = 3, tM = 1, t_ell_max = 50;
  auto *tw = app.add_subcommand("twist", "local types, sign-change factors and the quadratic-twist bijection");
  tw->add_option("--k", tk)->required();
  tw->add_option("--q", tq)->required();
  tw->add_option("--r", trr)->required();
  tw->add_option("--M", tM)->required();
  tw->add_option("--ell-max", t_ell_max, "largest ell in the trace-vanishing check");
  tw->callback([&] { run = [&] { return cmd_twist(cfg, tk, tq, trr, tM, t_ell_max); }; });

  std::vector<int> only;
  auto *st = app.add_subcommand("selftest", "run the acceptance suite");
  st->add_option("--only", only, "criteria to run")->check(CLI::Range(1, 10));
  st->callback([&] { run = [&] { return cmd_selftest(cfg, only); }; });

  CLI11_PARSE(app, argc, argv);
  CLI::App *active = app.get_subcommands().front();
  try {
    return run();
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

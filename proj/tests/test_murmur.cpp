#include <doctest.h>

#include "alsigns/murmur.hpp"
#include "alsigns/signs.hpp"
#include "alsigns/trace.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace alsigns;

namespace {

std::vector<i64> prime_list(i64 hi) {
  auto p = primes_up_to(hi);
  return p;
}

std::string slurp(const std::string &path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

double interpolate(const std::vector<MurmurationPoint> &pts, double x) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].x >= x) {
      double t = (x - pts[i - 1].x) / (pts[i].x - pts[i - 1].x);
      return pts[i - 1].average + t * (pts[i].average - pts[i - 1].average);
    }
  return pts.back().average;
}

} // namespace

TEST_CASE("family grammar") {
  for (std::string s : {"I:M=1", "I:M=5,omega=2", "II:Q=3,M=N", "II:Q=6,M=sqf", "II:Q=1,M=sqf_2",
                        "III:r=2,fixed=2,idx=1", "III:r=3,fixed=2,5,idx=1,3", "III:r=2,fixed=,idx="}) {
    auto f = FamilySpec::parse(s);
    CHECK(f.encode() == s);
    CHECK(FamilySpec::parse(f.encode()).encode() == s);
  }
  CHECK_THROWS_AS(FamilySpec::parse("I:M=4"), std::invalid_argument);
  CHECK_THROWS_AS(FamilySpec::parse("II:Q=6,M=N"), std::invalid_argument);
  CHECK_THROWS_AS(FamilySpec::parse("III:r=2,fixed=2,3,idx="), std::invalid_argument);
  CHECK_THROWS_AS(FamilySpec::parse("III:r=2,fixed=,idx=1,2"), std::invalid_argument);
  CHECK_THROWS_AS(FamilySpec::parse("III:r=3,fixed=5,2,idx="), std::invalid_argument);
  CHECK_THROWS_AS(FamilySpec::parse("IV:M=1"), std::invalid_argument);
  CHECK_THROWS_AS(FamilySpec::parse("I:M=1", 3), std::invalid_argument);
  CHECK_THROWS_AS(FamilySpec::parse("I:M=1", 2, Rational(1)), std::invalid_argument);
}

TEST_CASE("family levels") {
  auto f = FamilySpec::parse("III:r=2,fixed=2,idx=1");
  auto lv = family_levels(f, 100);
  REQUIRE_FALSE(lv.empty());
  for (std::size_t i = 0; i < lv.size(); ++i) {
    CHECK(lv[i].N >= 100);
    CHECK(lv[i].N <= 200);
    CHECK(lv[i].N % 2 == 0);
    CHECK(lv[i].Q == 2);
    CHECK(omega(lv[i].Nf) == 2);
    CHECK(is_squarefree(lv[i].Nf));
    if (i) CHECK(lv[i].N > lv[i - 1].N);
  }
  for (auto &l : family_levels(FamilySpec::parse("I:M=5"), 300)) {
    CHECK(l.N % 5 == 0);
    CHECK(l.Q * 5 == l.N);
    CHECK(is_squarefree(l.Nf));
  }
}

TEST_CASE("scan errors") {
  ScanOptions so;
  so.ell_max = 20;
  CHECK_THROWS_AS(scan_WQ(FamilySpec::parse("I:M=1", 2, Rational(11, 10)), 1, so), std::invalid_argument);
  CHECK_THROWS_AS(scan_eigenspace(FamilySpec::parse("III:r=2,fixed=2,idx=1"), {1}, 100, so), std::invalid_argument);
  CHECK_THROWS_AS(smooth({}, 1.5), std::invalid_argument);
}

TEST_CASE("type II with Q = 1 has unit weights") {
  auto f = FamilySpec::parse("II:Q=1,M=sqf", 4);
  ScanOptions so;
  so.ell_max = 30;
  auto pts = scan_WQ(f, 60, so);
  auto levels = family_levels(f, 60);
  for (auto &p : pts) {
    long double num = 0;
    i64 den = 0;
    for (auto &l : levels) {
      if (l.N % p.ell == 0) continue;
      den += newspace_dim(4, l.Nf);
      num += std::sqrt(static_cast<long double>(l.N)) * t_new_squarefree({4, 1, l.N, p.ell}).to_integer();
    }
    double expect = static_cast<double>(num / p.ell / den);
    CHECK(p.average == doctest::Approx(expect).epsilon(1e-12));
    CHECK(p.count == den);
  }
}

TEST_CASE("eigenspace traces decompose the newspace") {
  auto f = FamilySpec::parse("III:r=2,fixed=,idx=");
  for (auto &l : family_levels(f, 60)) {
    for (i64 ell : {1, 3, 5, 7, 11, 13}) {
      if (l.N % ell == 0) continue;
      auto tr = eigenspace_traces(2, l, ell);
      REQUIRE(tr.size() == 4);
      i64 sum = 0;
      for (i64 t : tr) sum += t;
      CHECK(sum == t_new_squarefree({2, 1, l.N, ell}).to_integer());
      if (ell == 1) {
        for (i64 t : tr) CHECK(t >= 0);
        CHECK(sum == newspace_dim(2, l.Nf));
      }
      // Bit i set means the i-th prime carries sign -1; tr W_Q sums the signed traces.
      for (std::size_t qmask = 0; qmask < 4; ++qmask) {
        i64 Q = 1;
        for (int i = 0; i < 2; ++i)
          if (qmask >> i & 1) Q *= l.primes[i];
        i64 signed_sum = 0;
        for (std::size_t e = 0; e < 4; ++e) signed_sum += (std::popcount(e & qmask) % 2 ? -1 : 1) * tr[e];
        CHECK(signed_sum == t_new_squarefree({2, Q, l.N / Q, ell}).to_integer());
      }
    }
  }
}

TEST_CASE("one-prime eigenspaces reduce to the binomial split") {
  Level l{31, 1, factor(31), {31}};
  for (int k : {2, 4, 6})
    for (i64 ell : {2, 3, 5, 7}) {
      auto tr = eigenspace_traces(k, l, ell);
      REQUIRE(tr.size() == 2);
      Rational plain = t_new_squarefree({k, 1, 31, ell}), fricke = t_new_squarefree({k, 31, 1, ell});
      CHECK(Rational(tr[0]) == (plain + fricke) / Rational(2));
      CHECK(Rational(tr[1]) == (plain - fricke) / Rational(2));
    }
}

TEST_CASE("inversion identity on type III windows") {
  std::vector<i64> ells = prime_list(40);
  for (auto [s, X] : std::vector<std::pair<std::string, i64>>{
           {"III:r=2,fixed=2,idx=1", 200}, {"III:r=2,fixed=3,idx=2", 200}, {"III:r=3,fixed=2,idx=1", 300}}) {
    auto rep = check_eigenspace_inversion(FamilySpec::parse(s), X, ells);
    CHECK(rep.levels > 0);
    CHECK(rep.checks > rep.levels);
    CHECK_MESSAGE(rep.failures == 0, rep.first_failure);
  }
}

TEST_CASE("smoothing") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<MurmurationPoint> pts;
  for (i64 p : prime_list(2000)) pts.push_back({p, 100, p / 100.0, u(rng), 10, 1, false});

  // Consecutive primes from 3 on differ by at least 2 > ell^0.01.
  auto same = smooth(pts, 0.01);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(same[i].average == pts[i].average);
    CHECK(same[i].window == 1);
  }

  std::vector<MurmurationPoint> flat = pts;
  for (auto &p : flat) p.average = 0.75;
  for (auto &p : smooth(flat, 0.75)) CHECK(p.average == doctest::Approx(0.75).epsilon(1e-14));

  for (double delta : {0.5, 0.75}) {
    auto sm = smooth(pts, delta);
    REQUIRE(sm.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      double hi = pts[i].ell + std::pow(static_cast<double>(pts[i].ell), delta);
      double sum = 0;
      int n = 0;
      for (std::size_t j = i; j < pts.size() && pts[j].ell < hi; ++j, ++n) sum += pts[j].average;
      CHECK(sm[i].window == n);
      CHECK(sm[i].average == doctest::Approx(sum / n).epsilon(1e-12));
      CHECK(sm[i].ell == pts[i].ell);
    }
    CHECK(sm.back().truncated);
  }
}

TEST_CASE("sqrt fit") {
  std::vector<MurmurationPoint> pts;
  for (i64 p : prime_list(200)) pts.push_back({p, 1000, p / 1000.0, 1.7 * std::sqrt(p / 1000.0), 1, 1, false});
  auto f = sqrt_fit(pts, 0.2, FitShape::sqrt_only);
  CHECK(f.c == doctest::Approx(1.7).epsilon(1e-10));
  CHECK(f.rms < 1e-12);
  for (auto &p : pts) p.average += 0.3;
  auto g = sqrt_fit(pts, 0.2, FitShape::sqrt_plus_constant);
  CHECK(g.c == doctest::Approx(1.7).epsilon(1e-8));
  CHECK(g.d == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(g.relative_rms < 1e-10);
  CHECK_THROWS_AS(sqrt_fit(pts, 0.015, FitShape::sqrt_only), std::invalid_argument);
}

TEST_CASE("csv round trip") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-3, 3);
  Series a{"III:r=2,fixed=2,idx=1", "plus", 2, Rational(3, 2), {}}, b{"I:M=1", "raw", 4, Rational(2), {}};
  for (i64 p : prime_list(300)) {
    a.points.push_back({p, 250, p / 250.0, u(rng), 1000 + p, 1, false});
    b.points.push_back({p, 500, p / 500.0, u(rng), 7 * p, 1, false});
  }
  auto dir = std::filesystem::temp_directory_path() / "alsigns-test-csv";
  std::filesystem::create_directories(dir);
  auto path = (dir / "s.csv").string();
  write_csv({a, b}, path);
  auto rows = read_csv(path);
  REQUIRE(rows.size() == a.points.size() + b.points.size());
  std::size_t i = 0;
  for (const Series *s : {&a, &b})
    for (auto &p : s->points) {
      const CsvRow &r = rows[i++];
      CHECK(r.family == s->family);
      CHECK(r.k == s->k);
      CHECK(r.beta == s->beta);
      CHECK(r.X == p.X);
      CHECK(r.ell == p.ell);
      CHECK(r.count == p.count);
      CHECK(format_g12(r.x) == format_g12(p.x));
      CHECK(format_g12(r.avg) == format_g12(p.average));
    }

  write_csv({}, path);
  CHECK(slurp(path) == "family,k,beta,X,ell,x,avg,count\n");
  CHECK(read_csv(path).empty());

  std::ofstream(path) << "family,k,beta,X,ell,x,avg,count\n\"I:M=1\",2,2,500\n";
  std::string where = path + ":2";
  CHECK_THROWS_WITH_AS(read_csv(path), doctest::Contains(where.c_str()), std::runtime_error);
  CHECK_THROWS_AS(read_csv((dir / "missing.csv").string()), std::runtime_error);

  auto svg = (dir / "s.svg").string();
  write_svg({a, b}, svg, "test");
  std::string text = slurp(svg);
  CHECK(text.find("<svg") != std::string::npos);
  CHECK(text.find("ell/X") != std::string::npos);
  CHECK(text.find("plus") != std::string::npos);
  CHECK(text.find("raw") != std::string::npos);
  std::filesystem::remove_all(dir);
}

TEST_CASE("eigenspace averages match direct traces") {
  auto f = FamilySpec::parse("III:r=2,fixed=2,idx=1");
  ScanOptions so;
  so.ell_max = 40;
  auto pts = scan_eigenspace(f, {1, -1}, 120, so);
  auto levels = family_levels(f, 120);
  for (auto &p : pts) {
    i64 num = 0, den = 0;
    for (auto &l : levels) {
      if (l.N % p.ell == 0) continue;
      // Primes are sorted, so 2 is index 0: sign (+, -) is bit 1.
      num += eigenspace_traces(2, l, p.ell)[2];
      den += eigenspace_traces(2, l, 1)[2];
    }
    CHECK(p.count == den);
    CHECK(p.average == doctest::Approx(static_cast<double>(num) / den).epsilon(1e-12));
  }
}

TEST_CASE("scale invariance smoke test") {
  ScanOptions so;
  auto f = FamilySpec::parse("I:M=1", 2);
  so.ell_max = 250;
  auto small = smooth(scan_WQ(f, 250, so), 0.75);
  so.ell_max = 500;
  auto large = smooth(scan_WQ(f, 500, so), 0.75);
  double se = 0, sv = 0;
  int n = 0;
  for (auto &p : large) {
    if (p.truncated || p.x > 0.9 || p.x < small.front().x) continue;
    double other = interpolate(small, p.x);
    se += (p.average - other) * (p.average - other);
    sv += p.average * p.average;
    ++n;
  }
  REQUIRE(n > 40);
  MESSAGE("relative rms " << std::sqrt(se / sv) << " over " << n << " points");
  CHECK(std::sqrt(se / sv) < 0.25);
}

TEST_CASE("ell dividing N changes averages by O(1/ell)") {
  ScanOptions so;
  so.ell_max = 200;
  auto f = FamilySpec::parse("I:M=1", 2);
  auto excl = scan_WQ(f, 250, so);
  so.include_ell_dividing_N = true;
  auto incl = scan_WQ(f, 250, so);
  REQUIRE(excl.size() == incl.size());
  double scale = 0;
  for (auto &p : excl) scale = std::max(scale, std::abs(p.average));
  double worst = 0;
  for (std::size_t i = 0; i < excl.size(); ++i) {
    CHECK(excl[i].ell == incl[i].ell);
    worst = std::max(worst, std::abs(incl[i].average - excl[i].average) / scale * excl[i].ell);
  }
  MESSAGE("max ell * |difference| / max|A| = " << worst);
  CHECK(worst < 5);
}

TEST_CASE("cancellation diagnostic") {
  auto rep = cancellation_diag(4, 300, Rational(2));
  REQUIRE_FALSE(rep.points.empty());
  for (auto &a : rep.points) {
    CHECK(2 * a.ell >= 300);
    CHECK(a.ell <= 600);
    CHECK(a.count_plus >= 0);
    CHECK(a.count_minus >= 0);
  }
  CHECK(rep.ratio < 0.5);
}

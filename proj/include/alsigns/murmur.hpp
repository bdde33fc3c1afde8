#pragma once

#include "alsigns/arith.hpp"
#include "alsigns/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace alsigns {

enum class FamilyType { I, II, III };
enum class MRange { all, squarefree, squarefree_r };

// Grammar: I:M=<m>[,omega=<r>]
//          II:Q=<q>,M=<N|sqf|sqf_<r>>
//          III:r=<r>,fixed=<p1,...>,idx=<i1,...>   (idx is 1-based, may be empty)
struct FamilySpec {
  FamilyType type = FamilyType::I;
  int k = 2;
  Rational beta{2};

  i64 M = 1;                 // Type I
  std::optional<int> omega;  // Type I: restrict to omega(Q) = omega

  i64 Q = 1;                 // Type II
  MRange m_range = MRange::squarefree;
  int m_omega = 0;           // Type II with sqf_<r>

  int r = 2;                 // Type III
  std::vector<i64> fixed;
  std::vector<int> idx;

  static FamilySpec parse(const std::string &text, int k = 2, Rational beta = Rational(2));
  std::string encode() const;
  void validate() const;
};

struct Level {
  i64 N = 0;
  i64 Q = 1;
  FactoredInt Nf;
  std::vector<i64> primes; // Type III: the sorted primes p_1 < ... < p_r
};

// Levels X <= N <= beta X of the family, in increasing order of N.
std::vector<Level> family_levels(const FamilySpec &spec, i64 X);

struct MurmurationPoint {
  i64 ell = 0;
  i64 X = 0;
  double x = 0;
  double average = 0;
  i64 count = 0;          // forms in the denominator
  int window = 1;         // primes averaged over (1 when unsmoothed)
  bool truncated = false; // smoothing window ran past the last scanned prime
};

struct ScanOptions {
  i64 ell_min = 2;
  i64 ell_max = 0; // 0 means 4X
  bool include_ell_dividing_N = false;
  int workers = 1;
};

// A^Q(ell, X; beta) for every prime ell in range.
std::vector<MurmurationPoint> scan_WQ(const FamilySpec &spec, i64 X, const ScanOptions &opt);

// Trace of T_ell W_Q on S_k^new(N) for one level of the family (ell coprime to N).
i64 level_trace(int k, const Level &level, i64 ell);

// Traces of T_ell on each Atkin-Lehner eigenspace of S_k^new(N), N squarefree
// with r prime factors, indexed by the bitmask of primes carrying sign -1.
// Throws std::logic_error if 2^-r sum eps(Q) tr T_ell W_Q is not integral.
std::vector<i64> eigenspace_traces(int k, const Level &level, i64 ell);

std::vector<MurmurationPoint> scan_eigenspace(const FamilySpec &spec, const std::vector<int> &epsilon, i64 X,
                                              const ScanOptions &opt);

struct InversionReport {
  i64 levels = 0;
  i64 checks = 0;
  i64 failures = 0;
  std::string first_failure;
};

// Exact check of the 2^r-point inversion between eigenspace traces and
// W_Q traces on every level of a Type III window, for ell = 1 and each prime
// ell in the list coprime to the level.
InversionReport check_eigenspace_inversion(const FamilySpec &spec, i64 X, const std::vector<i64> &ells);

// c_{I,X,beta} = sum over window levels of sqrt(Q_I / N).
double type3_c_weight(const FamilySpec &spec, const std::vector<int> &subset, i64 X);

// Mean over the points with ell <= ell' < ell + ell^delta.
std::vector<MurmurationPoint> smooth(const std::vector<MurmurationPoint> &points, double delta);

struct SqrtFit {
  double c = 0;
  double d = 0;
  double rms = 0;
  double range = 0;
  double relative_rms = 0;
  int n = 0;
};

enum class FitShape { sqrt_only, sqrt_plus_constant, sqrt_plus_linear };

// Least squares fit of average ~ c sqrt(x) + d g(x) over points with x < x_max,
// where g is 0, 1 or x by shape. Throws if fewer than 8 points remain.
SqrtFit sqrt_fit(const std::vector<MurmurationPoint> &points, double x_max, FitShape shape);

struct RootNumberAverages {
  i64 ell = 0;
  double plus = 0;
  double minus = 0;
  i64 count_plus = 0;
  i64 count_minus = 0;
};

struct CancellationReport {
  std::vector<RootNumberAverages> points;
  double max_sum = 0;  // max |A+ + A-|
  double max_diff = 0; // max |A+ - A-|
  double ratio = 0;    // max_sum / max_diff
};

// A^+ and A^- over squarefree levels in [X, beta X], split by root number
// (-1)^{k/2} w_N, for primes ell in [X/2, 2X].
CancellationReport cancellation_diag(int k, i64 X, Rational beta, int workers = 1);

struct Series {
  std::string family;
  std::string label;
  int k = 2;
  Rational beta{2};
  std::vector<MurmurationPoint> points;
};

struct CsvRow {
  std::string family;
  int k = 0;
  Rational beta;
  i64 X = 0;
  i64 ell = 0;
  double x = 0;
  double avg = 0;
  i64 count = 0;
};

std::string format_g12(double v);
void write_csv(const std::vector<Series> &series, const std::string &path);
std::vector<CsvRow> read_csv(const std::string &path);
void write_svg(const std::vector<Series> &series, const std::string &path, const std::string &title);

} // namespace alsigns

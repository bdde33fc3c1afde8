#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace alsigns {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SweepReport {
  long long points = 0;        // (k, q, r, M) evaluated
  long long path_mismatches = 0;
  long long covered = 0;       // points where a predicate applies
  long long zero_mismatches = 0;
  long long signed_verdicts = 0;
  long long sign_mismatches = 0;
  std::string first_mismatch;
  double seconds = 0;

  bool ok() const { return path_mismatches == 0 && zero_mismatches == 0 && sign_mismatches == 0; }
};

// Two-path comparison (closed form against the newspace trace pipeline) and
// predicate verdicts over even k in [k_min, k_max], prime powers q^r <= qr_max
// and 1 <= M <= m_max with (q, M) = 1.
SweepReport equidist_sweep(int k_min, int k_max, long long qr_max, long long m_max, int workers);

struct AcceptanceOptions {
  int workers = 1;
  std::uint64_t seed = 20240611;
  std::set<int> only; // empty runs every criterion
};

// Runs the acceptance criteria in order, reporting each result as it finishes.
// Assumes a Hurwitz table of at least kDefaultSieveBound is installed.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions &opt,
                                            const std::function<void(const CriterionResult &)> &on_result = {});

std::string format_result(const CriterionResult &r);

} // namespace alsigns

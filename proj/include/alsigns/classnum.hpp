#pragma once

#include "alsigns/rational.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace alsigns {

struct Discriminant {
  i64 delta = 0;
  i64 fundamental = 0; // 0 for delta = 0
  i64 conductor = 1;

  // Throws std::invalid_argument unless delta <= 0 and delta = 0,1 mod 4.
  static Discriminant make(i64 delta);
};

bool is_discriminant(i64 delta); // delta <= 0 and delta = 0,1 mod 4
bool is_fundamental(i64 delta);  // negative fundamental discriminant

Rational h_prime(i64 delta);
Rational hurwitz(i64 delta);
// H(delta) when delta is a discriminant, 0 otherwise.
Rational hurwitz_or_zero(i64 delta);
Rational hurwitz_t(i64 t, i64 delta);
// Class number of a negative fundamental discriminant by reduced forms.
i64 class_number_fundamental(i64 d0);

i64 default_oracle_bound();
// Brute-force weighted count of all reduced forms of discriminant delta.
Rational hurwitz_oracle(i64 delta, i64 bound = default_oracle_bound());

// Table of 12*H(-n) for 0 < n <= bound (zero when -n is not a discriminant).
class HurwitzTable {
public:
  HurwitzTable() = default;
  HurwitzTable(i64 bound, std::vector<std::uint32_t> twelve);

  i64 bound() const noexcept { return bound_; }
  bool covers(i64 n) const noexcept { return n >= 1 && n <= bound_; }
  Rational at(i64 n) const; // H(-n)
  std::uint32_t twelve_h(i64 n) const { return twelve_[static_cast<std::size_t>(n)]; }
  const std::vector<std::uint32_t> &raw() const noexcept { return twelve_; }

  std::uint64_t checksum() const;
  void save(const std::string &path) const;
  // Validates magic, version, bound and checksum; throws std::runtime_error.
  static HurwitzTable load(const std::string &path);

private:
  i64 bound_ = 0;
  std::vector<std::uint32_t> twelve_;
};

HurwitzTable hurwitz_sieve(i64 bound, int workers = 1);

// Process-wide table consulted by hurwitz_fast. Installing is not
// synchronized with readers; do it before starting parallel work.
void install_hurwitz_table(std::shared_ptr<const HurwitzTable> table);
std::shared_ptr<const HurwitzTable> installed_hurwitz_table();
constexpr i64 kDefaultSieveBound = 4'000'000;
// Installs a table of at least `bound`, loading it from `cache_path` when a
// valid file is there and writing one otherwise. Empty path disables caching.
std::shared_ptr<const HurwitzTable> ensure_hurwitz_table(i64 bound, const std::string &cache_path,
                                                         int workers = 1);

// hurwitz_or_zero, served from the installed table when it covers delta.
Rational hurwitz_fast(i64 delta);
Rational hurwitz_t_fast(i64 t, i64 delta);

} // namespace alsigns

#pragma once

#include "alsigns/arith.hpp"

#include <optional>
#include <string>
#include <vector>

namespace alsigns {

enum class LocalRepType {
  unramified_twist_of_steinberg,
  ramified_principal_series,
  ramified_twist_of_steinberg,
  unramified_supercuspidal,
  ramified_supercuspidal,
  exceptional_supercuspidal,
};

std::string to_string(LocalRepType t);

// Local types of conductor exponent r at q that a newform can have.
std::vector<LocalRepType> classify_local_types(i64 q, int r);

struct TwistCharacter {
  enum class Kind { odd_prime, minus_one, two, minus_two };
  Kind kind = Kind::minus_one;
  i64 p = 0; // the ramified prime for odd_prime

  static TwistCharacter odd(i64 p);
  static TwistCharacter chi_minus_one() { return {Kind::minus_one, 0}; }
  static TwistCharacter chi_two() { return {Kind::two, 0}; }
  static TwistCharacter chi_minus_two() { return {Kind::minus_two, 0}; }

  i64 conductor() const;
  i64 ramified_prime() const { return kind == Kind::odd_prime ? p : 2; }
  int operator()(i64 n) const;
  std::string name() const;
  bool operator==(const TwistCharacter &) const = default;
};

// Change of the W_q eigenvalue under twisting by chi, for chi unramified at q.
int kappa_away(i64 q, int r, const TwistCharacter &chi);

enum class RamifiedBranch { sqrt_q_star, sqrt_minus_q_star };

// Change of the W_q eigenvalue under twisting by chi_q, q odd, r >= 3.
// The branch is required for ramified supercuspidal types and ignored otherwise.
int kappa_at_q(i64 q, int r, LocalRepType type, std::optional<RamifiedBranch> branch = std::nullopt);

// True when every admissible local type of conductor r has its W_q sign
// flipped by chi_q.
bool twist_at_q_flips_every_type(i64 q, int r);

// The character whose twist swaps the W_q eigenspaces of S_k^new(q^r M), if
// one of the three level conditions holds. For the 2^7 case chi_2 is returned
// (chi_{-2} works as well).
std::optional<TwistCharacter> quadtwist_bijection(int k, i64 q, int r, const FactoredInt &M);

} // namespace alsigns

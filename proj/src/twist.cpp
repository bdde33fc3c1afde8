#include "alsigns/twist.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace alsigns {

std::string to_string(LocalRepType t) {
  switch (t) {
  case LocalRepType::unramified_twist_of_steinberg:
    return "unramified-twist-of-Steinberg";
  case LocalRepType::ramified_principal_series:
    return "ramified-principal-series";
  case LocalRepType::ramified_twist_of_steinberg:
    return "ramified-twist-of-Steinberg";
  case LocalRepType::unramified_supercuspidal:
    return "unramified-supercuspidal";
  case LocalRepType::ramified_supercuspidal:
    return "ramified-supercuspidal";
  case LocalRepType::exceptional_supercuspidal:
    return "exceptional-supercuspidal";
  }
  return "?";
}

std::vector<LocalRepType> classify_local_types(i64 q, int r) {
  if (!is_prime(q)) throw std::invalid_argument("q must be prime");
  if (r < 1) throw std::invalid_argument("r must be at least 1");
  using T = LocalRepType;
  if (r == 1) return {T::unramified_twist_of_steinberg};
  if (r == 2) return {T::ramified_principal_series, T::ramified_twist_of_steinberg, T::unramified_supercuspidal};
  std::vector<T> out;
  if (r % 2 == 1) {
    out.push_back(T::ramified_supercuspidal);
    if (q == 2 && (r == 3 || r == 7)) out.push_back(T::exceptional_supercuspidal);
  } else {
    out = {T::ramified_principal_series, T::unramified_supercuspidal};
    if (q == 2 && (r == 4 || r == 6)) out.push_back(T::exceptional_supercuspidal);
  }
  return out;
}

TwistCharacter TwistCharacter::odd(i64 p) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("chi_p needs an odd prime p");
  return {Kind::odd_prime, p};
}

i64 TwistCharacter::conductor() const {
  switch (kind) {
  case Kind::odd_prime:
    return p;
  case Kind::minus_one:
    return 4;
  default:
    return 8;
  }
}

int TwistCharacter::operator()(i64 n) const {
  switch (kind) {
  case Kind::odd_prime:
    return kronecker(p % 4 == 1 ? p : -p, n);
  case Kind::minus_one:
    return kronecker(-4, n);
  case Kind::two:
    return kronecker(8, n);
  default:
    return kronecker(-8, n);
  }
}

std::string TwistCharacter::name() const {
  switch (kind) {
  case Kind::odd_prime:
    return "chi_" + std::to_string(p);
  case Kind::minus_one:
    return "chi_-1";
  case Kind::two:
    return "chi_2";
  default:
    return "chi_-2";
  }
}

int kappa_away(i64 q, int r, const TwistCharacter &chi) {
  if (!is_prime(q)) throw std::invalid_argument("q must be prime");
  if (r < 1) throw std::invalid_argument("r must be at least 1");
  if (chi.ramified_prime() == q) throw std::invalid_argument(chi.name() + " is ramified at q");
  int base = chi.kind == TwistCharacter::Kind::odd_prime ? kronecker(q, chi.p) : chi(q);
  return (r % 2 == 0) ? 1 : base;
}

int kappa_at_q(i64 q, int r, LocalRepType type, std::optional<RamifiedBranch> branch) {
  if (q == 2 || !is_prime(q)) throw std::invalid_argument("kappa_at_q needs an odd prime q");
  if (r < 3) throw std::invalid_argument("kappa_at_q needs r >= 3");
  auto types = classify_local_types(q, r);
  if (std::find(types.begin(), types.end(), type) == types.end())
    throw std::invalid_argument(to_string(type) + " does not occur with conductor exponent " + std::to_string(r));
  int chi_m1 = kronecker(-1, q);
  switch (type) {
  case LocalRepType::ramified_principal_series:
    return chi_m1;
  case LocalRepType::unramified_supercuspidal:
    return -chi_m1;
  case LocalRepType::ramified_supercuspidal:
    if (!branch) throw std::invalid_argument("ramified supercuspidal needs the inducing field");
    return *branch == RamifiedBranch::sqrt_q_star ? 1 : -1;
  default:
    throw std::invalid_argument("no sign rule for " + to_string(type));
  }
}

bool twist_at_q_flips_every_type(i64 q, int r) {
  for (LocalRepType t : classify_local_types(q, r)) {
    if (t == LocalRepType::ramified_supercuspidal) {
      for (auto b : {RamifiedBranch::sqrt_q_star, RamifiedBranch::sqrt_minus_q_star})
        if (kappa_at_q(q, r, t, b) != -1) return false;
    } else if (kappa_at_q(q, r, t) != -1) {
      return false;
    }
  }
  return true;
}

std::optional<TwistCharacter> quadtwist_bijection(int k, i64 q, int r, const FactoredInt &M) {
  if (k < 2 || (k & 1)) throw std::invalid_argument("weight must be even and at least 2");
  if (!is_prime(q)) throw std::invalid_argument("q must be prime");
  if (r < 1 || r % 2 == 0) throw std::invalid_argument("r must be odd");
  if (std::gcd(q, M.value) != 1) throw std::invalid_argument("q must not divide M");
  for (auto [p, e] : M.factors)
    if (p != 2 && e >= 3 && kronecker(q, p) == -1) return TwistCharacter::odd(p);
  int e2 = M.exponent_of(2);
  if (e2 >= 5 && q % 4 == 3) return TwistCharacter::chi_minus_one();
  if (e2 >= 7 && q % 8 == 5) return TwistCharacter::chi_two();
  return std::nullopt;
}

} // namespace alsigns

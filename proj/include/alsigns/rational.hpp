#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace alsigns {

using i64 = std::int64_t;
using i128 = __int128;

// Exact rational with a 64-bit numerator and denominator. Every operation
// reduces its result and throws std::overflow_error instead of wrapping.
class Rational {
public:
  constexpr Rational() noexcept = default;
  constexpr Rational(i64 n) noexcept : num_(n), den_(1) {}
  Rational(i64 n, i64 d) { assign(n, d); }

  i64 num() const noexcept { return num_; }
  i64 den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }
  bool is_zero() const noexcept { return num_ == 0; }
  int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

  // Throws std::domain_error when the value is not an integer.
  i64 to_integer() const {
    if (den_ != 1) throw std::domain_error("rational " + str() + " is not an integer");
    return num_;
  }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  long double to_long_double() const noexcept {
    return static_cast<long double>(num_) / static_cast<long double>(den_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  // Accepts "a" or "a/b".
  static Rational parse(const std::string &text);

  Rational operator-() const { return from_wide(-static_cast<i128>(num_), den_); }

  friend Rational operator+(const Rational &a, const Rational &b) {
    if (a.den_ == b.den_) return from_wide(static_cast<i128>(a.num_) + b.num_, a.den_);
    return from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                     static_cast<i128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational &a, const Rational &b) { return a + (-b); }
  friend Rational operator*(const Rational &a, const Rational &b) {
    return from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational &a, const Rational &b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
  }

  Rational &operator+=(const Rational &o) { return *this = *this + o; }
  Rational &operator-=(const Rational &o) { return *this = *this - o; }
  Rational &operator*=(const Rational &o) { return *this = *this * o; }
  Rational &operator/=(const Rational &o) { return *this = *this / o; }

  friend bool operator==(const Rational &a, const Rational &b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b) noexcept {
    i128 l = static_cast<i128>(a.num_) * b.den_;
    i128 r = static_cast<i128>(b.num_) * a.den_;
    return l <=> r;
  }

  friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

private:
  i64 num_ = 0;
  i64 den_ = 1;

  void assign(i64 n, i64 d) { *this = from_wide(n, d); }

  static Rational from_wide(i128 n, i128 d);
};

inline Rational Rational::from_wide(i128 n, i128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 a = n < 0 ? -n : n;
  i128 b = d;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  constexpr i128 lim = static_cast<i128>(INT64_MAX);
  if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
  Rational r;
  r.num_ = static_cast<i64>(n);
  r.den_ = static_cast<i64>(d);
  return r;
}

inline Rational Rational::parse(const std::string &text) {
  auto slash = text.find('/');
  std::size_t used = 0;
  if (slash == std::string::npos) {
    i64 n = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("bad rational: " + text);
    return Rational(n);
  }
  std::string a = text.substr(0, slash), b = text.substr(slash + 1);
  i64 n = std::stoll(a, &used);
  if (used != a.size()) throw std::invalid_argument("bad rational: " + text);
  i64 d = std::stoll(b, &used);
  if (used != b.size()) throw std::invalid_argument("bad rational: " + text);
  return Rational(n, d);
}

// Checked 64-bit helpers shared by the integer kernels.
inline i64 checked_mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

inline i64 checked_add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
  return r;
}

inline i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

inline int sign_of(i64 v) noexcept { return (v > 0) - (v < 0); }

} // namespace alsigns

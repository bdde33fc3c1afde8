#include "alsigns/classnum.hpp"

#include "alsigns/arith.hpp"
#include "alsigns/parallel.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace alsigns {

namespace {

constexpr std::array<char, 8> kMagic = {'H', 'U', 'R', 'W', 'T', 'B', 'L', '\0'};
constexpr std::uint32_t kVersion = 1;

i64 mod4(i64 x) { return ((x % 4) + 4) % 4; }

// Weighted reduced-form count in twelfths, over all forms (primitive or not).
i64 twelve_reduced_count(i64 delta, bool primitive_only) {
  i64 D = -delta;
  i64 count = 0;
  for (i64 a = 1; 3 * a * a <= D; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      if (((b - delta) & 1) != 0) continue;
      i64 num = b * b + D;
      if (num % (4 * a) != 0) continue;
      i64 c = num / (4 * a);
      if (c < a) continue;
      if (c == a && b < 0) continue;
      if (primitive_only && std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
      if (a == c && b == 0)
        count += 6;
      else if (a == c && b == a)
        count += 4;
      else
        count += 12;
    }
  }
  return count;
}

std::uint64_t fnv1a(const std::vector<std::uint32_t> &v) {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint32_t x : v) {
    for (int i = 0; i < 4; ++i) {
      h ^= (x >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  }
  return h;
}

void put_u32(std::ostream &os, std::uint32_t x) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
  os.write(reinterpret_cast<const char *>(b), 4);
}

void put_u64(std::ostream &os, std::uint64_t x) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
  os.write(reinterpret_cast<const char *>(b), 8);
}

bool get_u32(std::istream &is, std::uint32_t &x) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char *>(b), 4)) return false;
  x = 0;
  for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return true;
}

bool get_u64(std::istream &is, std::uint64_t &x) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char *>(b), 8)) return false;
  x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return true;
}

std::shared_ptr<const HurwitzTable> g_table;
const HurwitzTable *g_table_raw = nullptr;
std::mutex g_table_mutex;

} // namespace

bool is_discriminant(i64 delta) { return delta <= 0 && (mod4(delta) == 0 || mod4(delta) == 1); }

Discriminant Discriminant::make(i64 delta) {
  if (!is_discriminant(delta))
    throw std::invalid_argument("not a discriminant: " + std::to_string(delta));
  Discriminant d;
  d.delta = delta;
  if (delta == 0) return d;
  i64 core = 1, f = 1;
  for (auto [p, e] : factor(-delta).factors) {
    if (e & 1) core *= p;
    f *= ipow(p, e / 2);
  }
  i64 dsf = -core;
  if (mod4(dsf) == 1) {
    d.fundamental = dsf;
    d.conductor = f;
  } else {
    d.fundamental = 4 * dsf;
    d.conductor = f / 2;
  }
  return d;
}

bool is_fundamental(i64 delta) {
  if (delta >= 0 || !is_discriminant(delta)) return false;
  return Discriminant::make(delta).conductor == 1;
}

i64 class_number_fundamental(i64 d0) {
  if (!is_fundamental(d0)) throw std::invalid_argument("not fundamental: " + std::to_string(d0));
  // Every form of fundamental discriminant is primitive, so the count is
  // exact once the 1/2 and 1/3 weights are removed.
  i64 tw = twelve_reduced_count(d0, true);
  if (d0 == -3) return 1;
  if (d0 == -4) return 1;
  return tw / 12;
}

namespace {
Rational h_prime_fundamental(i64 d0) {
  if (d0 == -3) return Rational(1, 3);
  if (d0 == -4) return Rational(1, 2);
  return Rational(class_number_fundamental(d0));
}
} // namespace

Rational h_prime(i64 delta) {
  if (delta >= 0) throw std::invalid_argument("h_prime needs a negative discriminant");
  Discriminant d = Discriminant::make(delta);
  Rational g(1);
  for (auto [p, m] : factor(d.conductor).factors)
    g *= Rational(ipow(p, m - 1) * (p - kronecker(d.fundamental, p)));
  return g * h_prime_fundamental(d.fundamental);
}

Rational hurwitz(i64 delta) {
  Discriminant d = Discriminant::make(delta);
  if (delta == 0) return Rational(-1, 12);
  Rational eta(1);
  for (auto [p, m] : factor(d.conductor).factors) {
    i64 s_m = sigma(ipow(p, m));
    i64 s_m1 = sigma(ipow(p, m - 1));
    eta *= Rational(s_m - kronecker(d.fundamental, p) * s_m1);
  }
  return eta * h_prime_fundamental(d.fundamental);
}

Rational hurwitz_or_zero(i64 delta) { return is_discriminant(delta) ? hurwitz(delta) : Rational(0); }

namespace {
template <class H> Rational hurwitz_t_impl(i64 t, i64 delta, H &&h) {
  if (t < 1) throw std::invalid_argument("hurwitz_t: t must be positive");
  if (!is_discriminant(delta)) throw std::invalid_argument("not a discriminant: " + std::to_string(delta));
  if (delta == 0) return Rational(-t, 12);
  i64 g = std::gcd(t, -delta);
  i64 b = 1;
  for (auto [p, e] : factor(g).factors)
    if (e & 1) b *= p;
  i64 dp = delta / g;
  i64 tp = t / g;
  if (dp % b != 0) return Rational(0);
  i64 D = dp / b;
  int chi = kronecker(D, tp);
  if (chi == 0) return Rational(0);
  return Rational(g * chi) * h(D);
}
} // namespace

Rational hurwitz_t(i64 t, i64 delta) { return hurwitz_t_impl(t, delta, hurwitz_or_zero); }

i64 default_oracle_bound() { return kDefaultSieveBound; }

Rational hurwitz_oracle(i64 delta, i64 bound) {
  if (delta >= 0) throw std::invalid_argument("hurwitz_oracle needs delta < 0");
  if (-delta > bound) throw std::invalid_argument("hurwitz_oracle: |delta| exceeds bound " + std::to_string(bound));
  if (!is_discriminant(delta)) throw std::invalid_argument("not a discriminant: " + std::to_string(delta));
  return Rational(twelve_reduced_count(delta, false), 12);
}

HurwitzTable::HurwitzTable(i64 bound, std::vector<std::uint32_t> twelve)
    : bound_(bound), twelve_(std::move(twelve)) {
  if (static_cast<i64>(twelve_.size()) != bound_ + 1) throw std::invalid_argument("table size mismatch");
}

Rational HurwitzTable::at(i64 n) const {
  if (!covers(n)) throw std::out_of_range("hurwitz table does not cover " + std::to_string(n));
  return Rational(twelve_[static_cast<std::size_t>(n)], 12);
}

std::uint64_t HurwitzTable::checksum() const { return fnv1a(twelve_); }

void HurwitzTable::save(const std::string &path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os.write(kMagic.data(), kMagic.size());
  put_u32(os, kVersion);
  put_u64(os, static_cast<std::uint64_t>(bound_));
  put_u64(os, checksum());
  for (std::uint32_t x : twelve_) put_u32(os, x);
  if (!os) throw std::runtime_error("write failed: " + path);
}

HurwitzTable HurwitzTable::load(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::array<char, 8> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw std::runtime_error(path + ": bad magic");
  std::uint32_t version = 0;
  std::uint64_t bound = 0, sum = 0;
  if (!get_u32(is, version) || version != kVersion) throw std::runtime_error(path + ": unsupported version");
  if (!get_u64(is, bound) || bound < 4 || bound > (1ull << 34)) throw std::runtime_error(path + ": bad bound");
  if (!get_u64(is, sum)) throw std::runtime_error(path + ": truncated header");
  std::vector<std::uint32_t> v(static_cast<std::size_t>(bound + 1));
  for (auto &x : v)
    if (!get_u32(is, x)) throw std::runtime_error(path + ": truncated payload");
  if (is.peek() != std::char_traits<char>::eof()) throw std::runtime_error(path + ": trailing bytes");
  if (fnv1a(v) != sum) throw std::runtime_error(path + ": checksum mismatch");
  return HurwitzTable(static_cast<i64>(bound), std::move(v));
}

HurwitzTable hurwitz_sieve(i64 bound, int workers) {
  if (bound < 4) throw std::invalid_argument("sieve bound must be at least 4");
  if (bound > (i64{1} << 34)) throw std::invalid_argument("sieve bound too large");
  std::size_t size = static_cast<std::size_t>(bound + 1);
  i64 amax = 0;
  while (3 * (amax + 1) * (amax + 1) <= bound) ++amax;
  int w = std::max(1, workers);
  std::vector<std::vector<std::uint32_t>> parts(static_cast<std::size_t>(w));
  try {
    for (auto &p : parts) p.assign(size, 0);
  } catch (const std::bad_alloc &) {
    throw std::runtime_error("hurwitz_sieve: not enough memory for bound " + std::to_string(bound));
  }
  parallel_for(static_cast<std::size_t>(w), w, [&](std::size_t part) {
    auto &tab = parts[part];
    for (i64 a = 1 + static_cast<i64>(part); a <= amax; a += w) {
      for (i64 b = 0; b <= a; ++b) {
        i64 D = 4 * a * a - b * b;
        if (D > bound) continue;
        tab[D] += (b == 0) ? 6 : (b == a ? 4 : 12);
        std::uint32_t wt = (b == 0 || b == a) ? 12 : 24;
        for (D += 4 * a; D <= bound; D += 4 * a) tab[D] += wt;
      }
    }
  });
  for (int i = 1; i < w; ++i)
    for (std::size_t n = 0; n < size; ++n) parts[0][n] += parts[static_cast<std::size_t>(i)][n];
  return HurwitzTable(bound, std::move(parts[0]));
}

void install_hurwitz_table(std::shared_ptr<const HurwitzTable> table) {
  std::lock_guard<std::mutex> lock(g_table_mutex);
  g_table = std::move(table);
  g_table_raw = g_table.get();
}

std::shared_ptr<const HurwitzTable> installed_hurwitz_table() {
  std::lock_guard<std::mutex> lock(g_table_mutex);
  return g_table;
}

std::shared_ptr<const HurwitzTable> ensure_hurwitz_table(i64 bound, const std::string &cache_path, int workers) {
  if (auto t = installed_hurwitz_table(); t && t->bound() >= bound) return t;
  std::shared_ptr<const HurwitzTable> table;
  if (!cache_path.empty()) {
    try {
      auto loaded = std::make_shared<HurwitzTable>(HurwitzTable::load(cache_path));
      if (loaded->bound() >= bound) table = std::move(loaded);
    } catch (const std::exception &) {
      // missing or invalid cache: rebuild below
    }
  }
  if (!table) {
    table = std::make_shared<HurwitzTable>(hurwitz_sieve(bound, workers));
    if (!cache_path.empty()) {
      try {
        table->save(cache_path);
      } catch (const std::exception &) {
        // the cache is an optimisation only
      }
    }
  }
  install_hurwitz_table(table);
  return table;
}

Rational hurwitz_fast(i64 delta) {
  const HurwitzTable *t = g_table_raw;
  if (t && delta < 0 && t->covers(-delta)) return Rational(t->twelve_h(-delta), 12);
  return hurwitz_or_zero(delta);
}

Rational hurwitz_t_fast(i64 t, i64 delta) { return hurwitz_t_impl(t, delta, hurwitz_fast); }

} // namespace alsigns

#pragma once

// Exact rational scalar used by every geometric predicate in the library.
// Values are kept reduced with a positive denominator; intermediates run
// through __int128 and narrowing back to int64 throws on overflow, so a
// silently wrong predicate is impossible.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fracpoin {

namespace detail {
inline unsigned __int128 gcd_u128(unsigned __int128 a, unsigned __int128 b) {
  while (b != 0) {
    unsigned __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}
}  // namespace detail

class Rat {
 public:
  constexpr Rat() = default;
  constexpr Rat(long long v) : num_(v), den_(1) {}  // NOLINT: implicit by design
  Rat(long long num, long long den) { *this = make(num, den); }

  static Rat make(__int128 num, __int128 den) {
    if (den == 0) throw std::domain_error("Rat: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) return Rat();
    unsigned __int128 an =
        num < 0 ? static_cast<unsigned __int128>(-num) : static_cast<unsigned __int128>(num);
    unsigned __int128 g = detail::gcd_u128(an, static_cast<unsigned __int128>(den));
    num /= static_cast<__int128>(g);
    den /= static_cast<__int128>(g);
    constexpr __int128 lo = std::numeric_limits<int64_t>::min();
    constexpr __int128 hi = std::numeric_limits<int64_t>::max();
    if (num < lo || num > hi || den > hi) throw std::overflow_error("Rat: overflow");
    Rat r;
    r.num_ = static_cast<int64_t>(num);
    r.den_ = static_cast<int64_t>(den);
    return r;
  }

  // Every finite double is a dyadic rational; this conversion is exact.
  static Rat from_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("Rat: non-finite double");
    if (v == 0.0) return Rat();
    int e = 0;
    double m = std::frexp(v, &e);  // v = m * 2^e, 0.5 <= |m| < 1
    auto num = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    Rat r(num);
    while (e > 0) {
      r = r * Rat(2);
      --e;
    }
    while (e < 0) {
      r = r / Rat(2);
      ++e;
    }
    return r;
  }

  // Accepts "p", "p/q" and plain decimals like "0.125".
  static Rat from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      long long n = std::stoll(s.substr(0, slash));
      long long d = std::stoll(s.substr(slash + 1));
      return Rat(n, d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      size_t frac = s.size() - dot - 1;
      long long n = std::stoll(digits);
      Rat r(n);
      for (size_t i = 0; i < frac; ++i) r = r / Rat(10);
      return r;
    }
    return Rat(std::stoll(s));
  }

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_dyadic() const {
    int64_t d = den_;
    while ((d & 1) == 0) d >>= 1;
    return d == 1;
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
    return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rat operator-() const {
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rat& operator+=(const Rat& b) { return *this = *this + b; }
  Rat& operator-=(const Rat& b) { return *this = *this - b; }
  Rat& operator*=(const Rat& b) { return *this = *this * b; }
  Rat& operator/=(const Rat& b) { return *this = *this / b; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rat& a, const Rat& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  int64_t num_ = 0;
  int64_t den_ = 1;
};

inline Rat abs(const Rat& a) { return a < Rat(0) ? -a : a; }
inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

inline Rat pow_int(const Rat& a, int k) {
  Rat r(1);
  for (int i = 0; i < k; ++i) r *= a;
  return r;
}

}  // namespace fracpoin

#pragma once

// Exact rationals over int64 (products formed in __int128 and checked) and
// Lebesgue exponents stored by their reciprocal, so infinity is 1/p = 0.

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace kchemo {

class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) { assign(n, d); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InvalidArgument("rational division by zero");
    return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l < r ? std::strong_ordering::less : (l > r ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

  /// Parses "n", "n/m" or a plain decimal like "0.05".
  static Rational parse(std::string_view s) {
    auto trim = [](std::string_view v) {
      while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
      while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
      return v;
    };
    s = trim(s);
    if (s.empty()) throw InvalidArgument("empty rational");
    if (const auto slash = s.find('/'); slash != std::string_view::npos)
      return Rational(parse_int(trim(s.substr(0, slash))), parse_int(trim(s.substr(slash + 1))));
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
      const auto whole = s.substr(0, dot);
      const auto frac = s.substr(dot + 1);
      if (frac.size() > 15) throw InvalidArgument("too many decimals in '" + std::string(s) + "'");
      std::int64_t scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      const bool neg = !whole.empty() && whole.front() == '-';
      const std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
      const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
      if (frac.size() && (frac.front() == '-' || frac.front() == '+')) throw InvalidArgument("bad decimal");
      return Rational(w, 1) + Rational(neg ? -f : f, scale);
    }
    return Rational(parse_int(s));
  }

private:
  static std::int64_t parse_int(std::string_view s) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw InvalidArgument("malformed number '" + std::string(s) + "'");
    return v;
  }

  static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rational make(__int128 n, __int128 d) {
    if (d == 0) throw InvalidArgument("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const __int128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || n < -lim || d > lim) throw InvalidArgument("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  void assign(std::int64_t n, std::int64_t d) { *this = make(n, d); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

/// A Lebesgue exponent p in [1, infinity], stored as 1/p.
class Exponent {
public:
  Exponent() : inv_(1) {}
  explicit Exponent(Rational p) {
    if (p < Rational(1)) throw InvalidArgument("exponent " + p.str() + " is below 1");
    inv_ = Rational(1) / p;
  }
  static Exponent from_inverse(Rational inv) {
    if (inv < Rational(0) || inv > Rational(1)) throw InvalidArgument("reciprocal exponent " + inv.str() + " outside [0,1]");
    Exponent e;
    e.inv_ = inv;
    return e;
  }
  static Exponent infinity() { return from_inverse(Rational(0)); }

  /// Accepts "inf", "infinity", integers, fractions and decimals.
  static Exponent parse(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s == "inf" || s == "infinity" || s == "Inf") return infinity();
    return Exponent(Rational::parse(s));
  }

  const Rational& inverse() const { return inv_; }
  bool is_infinite() const { return inv_.num() == 0; }
  Rational value() const {
    if (is_infinite()) throw InvalidArgument("infinite exponent has no rational value");
    return Rational(1) / inv_;
  }
  double to_double() const { return is_infinite() ? std::numeric_limits<double>::infinity() : 1.0 / inv_.to_double(); }
  /// Hoelder conjugate p' with 1/p + 1/p' = 1.
  Exponent conjugate() const { return from_inverse(Rational(1) - inv_); }

  std::string str() const { return is_infinite() ? "inf" : value().str(); }

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.inv_ == b.inv_; }

private:
  Rational inv_;
};

}  // namespace kchemo

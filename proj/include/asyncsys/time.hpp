#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <charconv>

#include "asyncsys/error.hpp"

namespace asyncsys {

/// Exact rational time instant. Always stored reduced with a positive
/// denominator, so structural equality is value equality.
class Time {
 public:
  constexpr Time() = default;
  constexpr Time(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit from integers
  Time(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  friend bool operator==(const Time&, const Time&) = default;
  friend std::strong_ordering operator<=>(const Time& a, const Time& b) {
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  friend Time operator+(const Time& a, const Time& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Time operator-(const Time& a, const Time& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                     static_cast<__int128>(a.den_) * b.den_);
  }
  friend Time operator*(const Time& a, const Time& b) {
    return from_wide(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
  }
  friend Time operator/(const Time& a, const Time& b) {
    if (b.num_ == 0) throw Error("time division by zero");
    return from_wide(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
  }
  Time operator-() const { return Time(-num_, den_); }
  Time& operator+=(const Time& o) { return *this = *this + o; }
  Time& operator-=(const Time& o) { return *this = *this - o; }

  /// Largest integer k with k <= value.
  std::int64_t floor() const {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  static Time midpoint(const Time& a, const Time& b) { return (a + b) / Time(2); }

  /// Least common multiple of two positive rationals: lcm(numerators) / gcd(denominators).
  static Time lcm(const Time& a, const Time& b) {
    if (a.num_ <= 0 || b.num_ <= 0) throw Error("lcm of non-positive time");
    __int128 n = std::lcm(a.num_, b.num_);
    return from_wide(n, std::gcd(a.den_, b.den_));
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /// Parses `a` or `a/b` (a may be negative).
  static std::optional<Time> parse(std::string_view text) {
    auto slash = text.find('/');
    std::int64_t n = 0;
    std::int64_t d = 1;
    auto parse_int = [](std::string_view s, std::int64_t& out) {
      if (s.empty()) return false;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      return ec == std::errc() && ptr == s.data() + s.size();
    };
    if (slash == std::string_view::npos) {
      if (!parse_int(text, n)) return std::nullopt;
    } else {
      if (!parse_int(text.substr(0, slash), n) || !parse_int(text.substr(slash + 1), d)) return std::nullopt;
      if (d <= 0) return std::nullopt;
    }
    return Time(n, d);
  }

  friend std::ostream& operator<<(std::ostream& os, const Time& t) { return os << t.str(); }

 private:
  static Time from_wide(__int128 n, __int128 d) {
    if (d == 0) throw Error("zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      __int128 r = a % b;
      a = b;
      b = r;
    }
    if (a > 1) {
      n /= a;
      d /= a;
    }
    constexpr __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) throw Error("time arithmetic overflow");
    Time t;
    t.num_ = static_cast<std::int64_t>(n);
    t.den_ = static_cast<std::int64_t>(d);
    return t;
  }

  void assign(std::int64_t num, std::int64_t den) { *this = from_wide(num, den); }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace asyncsys

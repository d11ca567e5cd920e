#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asyncsys/error.hpp"

namespace asyncsys {

/// A vector in B^k, 1 <= k <= 64. Coordinate i (0-based) lives in bit i of
/// the mask; text form lists coordinates left to right.
class Bits {
 public:
  static constexpr int kMaxWidth = 64;

  Bits() = default;
  explicit Bits(int width, std::uint64_t mask = 0) : width_(width), mask_(mask & full_mask(width)) {
    if (width < 1 || width > kMaxWidth) throw Error("bit width out of range: " + std::to_string(width));
  }

  static Bits parse_or_throw(std::string_view text) {
    auto b = parse(text);
    if (!b) throw Error("malformed bit string '" + std::string(text) + "'");
    return *b;
  }
  static std::optional<Bits> parse(std::string_view text) {
    if (text.empty() || text.size() > kMaxWidth) return std::nullopt;
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '1') m |= std::uint64_t{1} << i;
      else if (text[i] != '0') return std::nullopt;
    }
    return Bits(static_cast<int>(text.size()), m);
  }

  /// Bits whose coordinate 1 is the most significant bit of `index`.
  static Bits from_index(int width, std::uint64_t index) {
    Bits b(width);
    for (int i = 0; i < width; ++i)
      if ((index >> (width - 1 - i)) & 1u) b.mask_ |= std::uint64_t{1} << i;
    return b;
  }
  std::uint64_t index() const {
    std::uint64_t r = 0;
    for (int i = 0; i < width_; ++i) r = (r << 1) | ((mask_ >> i) & 1u);
    return r;
  }

  int width() const { return width_; }
  std::uint64_t mask() const { return mask_; }
  bool operator[](int i) const { return (mask_ >> i) & 1u; }
  void set(int i, bool v) {
    if (v) mask_ |= std::uint64_t{1} << i;
    else mask_ &= ~(std::uint64_t{1} << i);
  }

  Bits complement() const { return Bits(width_, ~mask_); }

  Bits select(const std::vector<int>& indices) const {
    Bits r(static_cast<int>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (indices[k] < 0 || indices[k] >= width_) throw Error("coordinate index out of range");
      r.set(static_cast<int>(k), (*this)[indices[k]]);
    }
    return r;
  }
  Bits concat(const Bits& other) const {
    Bits r(width_ + other.width_, mask_);
    r.mask_ |= other.mask_ << width_;
    return r;
  }

  std::string str() const {
    std::string s(static_cast<std::size_t>(width_), '0');
    for (int i = 0; i < width_; ++i)
      if ((*this)[i]) s[static_cast<std::size_t>(i)] = '1';
    return s;
  }

  friend bool operator==(const Bits&, const Bits&) = default;
  friend std::strong_ordering operator<=>(const Bits& a, const Bits& b) {
    if (auto c = a.width_ <=> b.width_; c != 0) return c;
    return a.index() <=> b.index();
  }

  /// All vectors of the given width in lexicographic order.
  static std::vector<Bits> all(int width) {
    if (width > 20) throw Error("refusing to enumerate B^" + std::to_string(width));
    std::vector<Bits> r;
    for (std::uint64_t k = 0; k < (std::uint64_t{1} << width); ++k) r.push_back(from_index(width, k));
    return r;
  }

 private:
  static std::uint64_t full_mask(int width) {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
  }

  int width_ = 1;
  std::uint64_t mask_ = 0;
};

/// Boolean function B^in -> B^out as an explicit truth table. Row k is the
/// image of Bits::from_index(in, k).
class BoolFn {
 public:
  BoolFn(int in_width, int out_width, std::vector<Bits> table)
      : in_width_(in_width), out_width_(out_width), table_(std::move(table)) {
    if (in_width < 1 || in_width > 20) throw Error("BoolFn input width out of range");
    if (table_.size() != (std::size_t{1} << in_width))
      throw Error("BoolFn table needs " + std::to_string(std::size_t{1} << in_width) + " rows, got " +
                  std::to_string(table_.size()));
    for (const auto& row : table_)
      if (row.width() != out_width) throw Error("BoolFn row width mismatch");
  }

  static BoolFn identity(int width) {
    std::vector<Bits> t;
    for (const auto& b : Bits::all(width)) t.push_back(b);
    return BoolFn(width, width, std::move(t));
  }
  static BoolFn constant(int in_width, const Bits& value) {
    return BoolFn(in_width, value.width(), std::vector<Bits>(std::size_t{1} << in_width, value));
  }
  template <typename Fn>
  static BoolFn from(int in_width, int out_width, Fn&& fn) {
    std::vector<Bits> t;
    for (const auto& b : Bits::all(in_width)) t.push_back(fn(b));
    return BoolFn(in_width, out_width, std::move(t));
  }

  int in_width() const { return in_width_; }
  int out_width() const { return out_width_; }
  const std::vector<Bits>& table() const { return table_; }

  Bits operator()(const Bits& x) const {
    if (x.width() != in_width_) throw Error("BoolFn applied to wrong width");
    return table_[x.index()];
  }

  std::optional<Bits> constant_value() const {
    for (const auto& row : table_)
      if (row != table_.front()) return std::nullopt;
    return table_.front();
  }

  friend bool operator==(const BoolFn&, const BoolFn&) = default;

 private:
  int in_width_;
  int out_width_;
  std::vector<Bits> table_;
};

}  // namespace asyncsys

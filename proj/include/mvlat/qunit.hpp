#pragma once

// Exact rationals in [0,1] with the operations of the standard MV-algebra.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "mvlat/errors.hpp"

namespace mvlat {

using Integer = boost::multiprecision::cpp_int;

/// A rational number p/q with 0 <= p <= q, always kept in lowest terms.
class UnitRational {
 public:
  UnitRational() = default;

  UnitRational(Integer num, Integer den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ <= 0) throw input_error("unit rational: denominator must be positive");
    if (num_ < 0 || num_ > den_) throw input_error("unit rational: value outside [0,1]");
    normalize();
  }

  UnitRational(std::int64_t num, std::int64_t den) : UnitRational(Integer(num), Integer(den)) {}

  static UnitRational zero() { return {}; }
  static UnitRational one() { return UnitRational(1, 1); }

  const Integer& numerator() const { return num_; }
  const Integer& denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == den_; }

  /// True when the value is k/n for some integer k, i.e. it lies in Ł_n.
  bool on_grid(std::int64_t n) const { return n > 0 && (Integer(n) % den_) == 0; }

  /// k such that the value equals k/n. Requires on_grid(n).
  std::int64_t grid_index(std::int64_t n) const {
    if (!on_grid(n)) throw input_error("unit rational: " + str() + " is not on grid " + std::to_string(n));
    return static_cast<std::int64_t>(num_ * n / den_);
  }

  std::string str() const {
    if (num_ == 0) return "0";
    if (num_ == den_) return "1";
    return num_.str() + "/" + den_.str();
  }

  /// Accepts "0", "1", "p/q" and "p" (only 0 or 1 are in range). Non-reduced
  /// fractions such as "2/4" are normalized.
  static UnitRational parse(std::string_view text) {
    auto digits = [&](std::string_view part) {
      if (part.empty()) throw input_error("unit rational: cannot parse '" + std::string(text) + "'");
      for (char c : part)
        if (c < '0' || c > '9') throw input_error("unit rational: cannot parse '" + std::string(text) + "'");
      return Integer(std::string(part));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return UnitRational(digits(text), Integer(1));
    return UnitRational(digits(text.substr(0, slash)), digits(text.substr(slash + 1)));
  }

  friend bool operator==(const UnitRational& a, const UnitRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(const UnitRational& a, const UnitRational& b) {
    if (a.den_ == b.den_) return cmp(a.num_, b.num_);
    return cmp(a.num_ * b.den_, b.num_ * a.den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const UnitRational& x) { return os << x.str(); }

  // Unchecked constructor for results already known to be in range.
  struct raw_tag {};
  UnitRational(raw_tag, Integer num, Integer den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

 private:
  static std::strong_ordering cmp(const Integer& x, const Integer& y) {
    if (x < y) return std::strong_ordering::less;
    if (y < x) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  void normalize() {
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    Integer g = boost::multiprecision::gcd(num_, den_);
    if (g != 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  Integer num_{0};
  Integer den_{1};
};

namespace detail {

// Numerator and denominator of a + b over a common denominator.
inline std::pair<Integer, Integer> common_sum(const UnitRational& a, const UnitRational& b) {
  if (a.denominator() == b.denominator()) return {a.numerator() + b.numerator(), a.denominator()};
  return {a.numerator() * b.denominator() + b.numerator() * a.denominator(), a.denominator() * b.denominator()};
}

}  // namespace detail

/// a ⊕ b = min(1, a + b)
inline UnitRational mv_add(const UnitRational& a, const UnitRational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto [num, den] = detail::common_sum(a, b);
  if (num >= den) return UnitRational::one();
  return UnitRational(UnitRational::raw_tag{}, std::move(num), std::move(den));
}

/// a* = 1 - a
inline UnitRational mv_neg(const UnitRational& a) {
  return UnitRational(UnitRational::raw_tag{}, a.denominator() - a.numerator(), a.denominator());
}

/// a ⊙ b = max(0, a + b - 1)
inline UnitRational mv_mul(const UnitRational& a, const UnitRational& b) {
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  auto [num, den] = detail::common_sum(a, b);
  if (num <= den) return UnitRational::zero();
  return UnitRational(UnitRational::raw_tag{}, num - den, std::move(den));
}

/// a ⊖ b = a ⊙ b*
inline UnitRational mv_sub(const UnitRational& a, const UnitRational& b) { return mv_mul(a, mv_neg(b)); }

inline UnitRational join(const UnitRational& a, const UnitRational& b) { return a < b ? b : a; }
inline UnitRational meet(const UnitRational& a, const UnitRational& b) { return a < b ? a : b; }

/// d(a, b) = (a ⊖ b) ⊕ (b ⊖ a), which is |a - b| on the standard chain.
inline UnitRational dist(const UnitRational& a, const UnitRational& b) {
  return mv_add(mv_sub(a, b), mv_sub(b, a));
}

}  // namespace mvlat

template <>
struct std::hash<mvlat::UnitRational> {
  std::size_t operator()(const mvlat::UnitRational& x) const noexcept {
    return boost::multiprecision::hash_value(x.numerator()) * 1000003u ^
           boost::multiprecision::hash_value(x.denominator());
  }
};

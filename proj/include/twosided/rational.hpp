#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

namespace twosided {

/// Exact rational number in reduced form with a positive denominator.
///
/// Values whose numerator and denominator fit in 64 bits are stored inline;
/// anything larger spills to a GMP rational. The two encodings are kept
/// canonical, so equal values always share one representation.
class Rat {
 public:
  Rat() = default;
  Rat(std::int64_t n);  // NOLINT(google-explicit-constructor)
  Rat(std::int64_t n, std::int64_t d);

  /// Parses "n", "-n", "n/d" or a finite decimal such as "0.25".
  static Rat parse(std::string_view text);

  /// Canonical "num/den" rendering; integers render as "num/1".
  std::string str() const;
  double to_double() const;

  int sign() const;
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;

  Rat operator-() const;
  Rat& operator+=(const Rat& o);
  Rat& operator-=(const Rat& o);
  Rat& operator*=(const Rat& o);
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b);
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b);

  /// Numerator and denominator as decimal strings.
  std::string numerator_str() const;
  std::string denominator_str() const;

  /// Stable 64-bit hash of the canonical text form.
  std::uint64_t hash() const;

  struct Big;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const Big> big_;

  friend struct RatOps;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }
inline const Rat& min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline const Rat& max(const Rat& a, const Rat& b) { return a < b ? b : a; }

/// A rational or +infinity; used for upper offer caps and threshold bids.
class RatOrInf {
 public:
  RatOrInf() : inf_(true) {}
  RatOrInf(Rat v) : inf_(false), v_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  static RatOrInf infinity() { return {}; }

  bool is_inf() const { return inf_; }
  /// Precondition: finite.
  const Rat& value() const;
  std::string str() const { return inf_ ? "inf" : v_.str(); }

  friend bool operator==(const RatOrInf& a, const RatOrInf& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_);
  }
  friend std::strong_ordering operator<=>(const RatOrInf& a, const RatOrInf& b) {
    if (a.inf_ || b.inf_) return static_cast<int>(a.inf_) <=> static_cast<int>(b.inf_);
    return a.v_ <=> b.v_;
  }
  friend bool operator==(const RatOrInf& a, const Rat& b) { return !a.inf_ && a.v_ == b; }
  friend std::strong_ordering operator<=>(const RatOrInf& a, const Rat& b) {
    if (a.inf_) return std::strong_ordering::greater;
    return a.v_ <=> b;
  }

 private:
  bool inf_;
  Rat v_;
};

}  // namespace twosided

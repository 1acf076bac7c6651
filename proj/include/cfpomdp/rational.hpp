#pragma once

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace cfpomdp {

using BigInt = mpz_class;

/// Exact rational number, always kept in lowest terms with a positive
/// denominator. Backed by GMP.
class Rat {
 public:
  Rat() = default;
  Rat(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rat(const BigInt& num, const BigInt& den);
  explicit Rat(mpq_class value);

  /// Accepts "p/q" or "p" (integer). Decimal notation is rejected.
  static Rat parse(std::string_view text);

  [[nodiscard]] std::string str() const;
  [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
  [[nodiscard]] bool is_one() const { return value_ == 1; }
  [[nodiscard]] bool is_probability() const { return value_ >= 0 && value_ <= 1; }
  [[nodiscard]] BigInt numerator() const { return value_.get_num(); }
  [[nodiscard]] BigInt denominator() const { return value_.get_den(); }
  [[nodiscard]] double to_double() const { return value_.get_d(); }
  [[nodiscard]] const mpq_class& raw() const { return value_; }

  Rat& operator+=(const Rat& o) { value_ += o.value_; return *this; }
  Rat& operator-=(const Rat& o) { value_ -= o.value_; return *this; }
  Rat& operator*=(const Rat& o) { value_ *= o.value_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.value_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

/// base^exponent for non-negative exponents.
BigInt big_pow(const BigInt& base, unsigned long exponent);

}  // namespace cfpomdp

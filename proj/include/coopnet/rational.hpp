#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coopnet {

// Signed arbitrary-precision integer. Values with |v| <= 2^62 are stored
// inline in an int64 and never touch the heap; larger values spill into a
// little-endian uint32 limb vector. All operations are exact.
class Bigint {
 public:
  Bigint() = default;
  Bigint(long long v);  // NOLINT(google-explicit-constructor)

  static Bigint from_string(std::string_view s);
  std::string to_string() const;

  int sign() const;  // -1, 0, +1
  bool is_zero() const { return limbs_.empty() && small_ == 0; }
  bool fits_int64() const;
  long long to_int64() const;  // throws std::overflow_error if it does not fit

  Bigint operator-() const;
  Bigint abs() const;

  friend Bigint operator+(const Bigint& a, const Bigint& b);
  friend Bigint operator-(const Bigint& a, const Bigint& b);
  friend Bigint operator*(const Bigint& a, const Bigint& b);
  // Truncated division, like int64: quotient rounds toward zero and the
  // remainder takes the dividend's sign. Division by zero throws.
  friend Bigint operator/(const Bigint& a, const Bigint& b);
  friend Bigint operator%(const Bigint& a, const Bigint& b);
  static void divmod(const Bigint& a, const Bigint& b, Bigint& q, Bigint& r);

  Bigint& operator+=(const Bigint& b) { return *this = *this + b; }
  Bigint& operator-=(const Bigint& b) { return *this = *this - b; }
  Bigint& operator*=(const Bigint& b) { return *this = *this * b; }

  static Bigint gcd(const Bigint& a, const Bigint& b);  // nonnegative

  friend bool operator==(const Bigint& a, const Bigint& b);
  friend std::strong_ordering operator<=>(const Bigint& a, const Bigint& b);

 private:
  // Small form: limbs_ empty, value in small_, |small_| <= kSmallMax.
  // Big form: limbs_ holds the magnitude (no leading zeros), small_ is +-1.
  long long small_ = 0;
  std::vector<std::uint32_t> limbs_;

  static constexpr long long kSmallMax = 1LL << 62;

  bool is_small() const { return limbs_.empty(); }
  static Bigint make(int sign, std::vector<std::uint32_t> mag);
  static Bigint from_i128(__int128 v);
  __int128 to_i128_unchecked() const;  // valid for small-form values only
  std::vector<std::uint32_t> magnitude() const;
  friend int compare(const Bigint& a, const Bigint& b);
};

// Exact rational number: Bigint numerator over positive Bigint denominator,
// always in lowest terms. Equality and ordering are exact.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long v) : num_(v), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(long long n, long long d);
  Rational(Bigint n, Bigint d);

  // Accepts "p", "-p", "p/q", "-p/q" with decimal digits; q > 0 after parsing.
  static Rational from_string(std::string_view s);
  // "p/q" in lowest terms, or a bare integer when the denominator is 1.
  std::string to_string() const;

  const Bigint& num() const { return num_; }
  const Bigint& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_integer() const { return den_ == Bigint(1); }
  int sign() const { return num_.sign(); }

  Rational operator-() const;
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);  // throws on /0

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  Bigint num_;
  Bigint den_;
  void reduce();
};

}  // namespace coopnet

#include "coopnet/rational.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "coopnet/errors.hpp"

namespace coopnet {

namespace {

using Mag = std::vector<std::uint32_t>;

void mag_trim(Mag& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Mag mag_from_u64(std::uint64_t v) {
  Mag m;
  if (v) m.push_back(static_cast<std::uint32_t>(v));
  if (v >> 32) m.push_back(static_cast<std::uint32_t>(v >> 32));
  return m;
}

int mag_cmp(const Mag& a, const Mag& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

Mag mag_add(const Mag& a, const Mag& b) {
  Mag r;
  r.reserve(std::max(a.size(), b.size()) + 1);
  std::uint64_t carry = 0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    std::uint64_t s = carry;
    if (i < a.size()) s += a[i];
    if (i < b.size()) s += b[i];
    r.push_back(static_cast<std::uint32_t>(s));
    carry = s >> 32;
  }
  if (carry) r.push_back(static_cast<std::uint32_t>(carry));
  return r;
}

// requires a >= b
Mag mag_sub(const Mag& a, const Mag& b) {
  Mag r;
  r.reserve(a.size());
  std::int64_t borrow = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::int64_t d = static_cast<std::int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
    borrow = d < 0;
    if (d < 0) d += (1LL << 32);
    r.push_back(static_cast<std::uint32_t>(d));
  }
  mag_trim(r);
  return r;
}

Mag mag_mul(const Mag& a, const Mag& b) {
  if (a.empty() || b.empty()) return {};
  Mag r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::uint64_t cur = r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j] + carry;
      r[i + j] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
    }
    std::size_t k = i + b.size();
    while (carry) {
      std::uint64_t cur = r[k] + carry;
      r[k] = static_cast<std::uint32_t>(cur);
      carry = cur >> 32;
      ++k;
    }
  }
  mag_trim(r);
  return r;
}

std::size_t mag_bits(const Mag& a) {
  if (a.empty()) return 0;
  return 32 * (a.size() - 1) + (32 - std::countl_zero(a.back()));
}

bool mag_bit(const Mag& a, std::size_t i) {
  return (a[i / 32] >> (i % 32)) & 1u;
}

void mag_shl1_accum_bit(Mag& r, bool bit) {
  std::uint32_t carry = bit ? 1u : 0u;
  for (auto& limb : r) {
    std::uint32_t next = limb >> 31;
    limb = (limb << 1) | carry;
    carry = next;
  }
  if (carry) r.push_back(carry);
}

// restoring binary division; fine at the sizes this library sees
void mag_divmod(const Mag& a, const Mag& b, Mag& q, Mag& r) {
  q.assign(a.size(), 0);
  r.clear();
  for (std::size_t i = mag_bits(a); i-- > 0;) {
    mag_shl1_accum_bit(r, mag_bit(a, i));
    if (mag_cmp(r, b) >= 0) {
      r = mag_sub(r, b);
      q[i / 32] |= 1u << (i % 32);
    }
  }
  mag_trim(q);
}

std::uint32_t mag_divmod_u32(Mag& a, std::uint32_t d) {
  std::uint64_t rem = 0;
  for (std::size_t i = a.size(); i-- > 0;) {
    std::uint64_t cur = (rem << 32) | a[i];
    a[i] = static_cast<std::uint32_t>(cur / d);
    rem = cur % d;
  }
  mag_trim(a);
  return static_cast<std::uint32_t>(rem);
}

std::size_t mag_trailing_zeros(const Mag& a) {
  std::size_t tz = 0;
  for (std::uint32_t limb : a) {
    if (limb == 0) {
      tz += 32;
    } else {
      tz += std::countr_zero(limb);
      break;
    }
  }
  return tz;
}

Mag mag_shr(Mag a, std::size_t k) {
  std::size_t words = k / 32, bits = k % 32;
  if (words >= a.size()) return {};
  a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(words));
  if (bits) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] >>= bits;
      if (i + 1 < a.size()) a[i] |= a[i + 1] << (32 - bits);
    }
  }
  mag_trim(a);
  return a;
}

Mag mag_shl(Mag a, std::size_t k) {
  if (a.empty()) return a;
  std::size_t words = k / 32, bits = k % 32;
  if (bits) {
    std::uint32_t carry = 0;
    for (auto& limb : a) {
      std::uint32_t next = limb >> (32 - bits);
      limb = (limb << bits) | carry;
      carry = next;
    }
    if (carry) a.push_back(carry);
  }
  a.insert(a.begin(), words, 0);
  return a;
}

Mag mag_gcd(Mag a, Mag b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::size_t az = mag_trailing_zeros(a), bz = mag_trailing_zeros(b);
  std::size_t shift = std::min(az, bz);
  a = mag_shr(std::move(a), az);
  do {
    b = mag_shr(std::move(b), mag_trailing_zeros(b));
    if (mag_cmp(a, b) > 0) std::swap(a, b);
    b = mag_sub(b, a);
  } while (!b.empty());
  return mag_shl(std::move(a), shift);
}

}  // namespace

Bigint::Bigint(long long v) {
  if (v >= -kSmallMax && v <= kSmallMax) {
    small_ = v;
  } else {
    // two's-complement negate in unsigned space; llabs(INT64_MIN) would overflow
    std::uint64_t mag = v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
    small_ = v < 0 ? -1 : 1;
    limbs_ = mag_from_u64(mag);
  }
}

Bigint Bigint::make(int sign, Mag mag) {
  Bigint r;
  mag_trim(mag);
  if (mag.empty() || sign == 0) return r;
  if (mag_bits(mag) <= 62) {
    std::uint64_t v = mag[0];
    if (mag.size() > 1) v |= static_cast<std::uint64_t>(mag[1]) << 32;
    r.small_ = sign * static_cast<long long>(v);
  } else {
    r.small_ = sign;
    r.limbs_ = std::move(mag);
  }
  return r;
}

Bigint Bigint::from_i128(__int128 v) {
  if (v >= -static_cast<__int128>(kSmallMax) && v <= static_cast<__int128>(kSmallMax)) {
    Bigint r;
    r.small_ = static_cast<long long>(v);
    return r;
  }
  int sign = v < 0 ? -1 : 1;
  unsigned __int128 m = v < 0 ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Mag mag;
  while (m) {
    mag.push_back(static_cast<std::uint32_t>(m));
    m >>= 32;
  }
  return make(sign, std::move(mag));
}

__int128 Bigint::to_i128_unchecked() const { return small_; }

Mag Bigint::magnitude() const {
  if (!is_small()) return limbs_;
  return mag_from_u64(static_cast<std::uint64_t>(std::llabs(small_)));
}

int Bigint::sign() const {
  if (is_small()) return small_ < 0 ? -1 : (small_ > 0 ? 1 : 0);
  return static_cast<int>(small_);
}

bool Bigint::fits_int64() const {
  if (is_small()) return true;
  // big form means |v| > 2^62, i.e. exactly two limbs when it still fits
  if (mag_bits(limbs_) > 64) return false;
  std::uint64_t v = limbs_[0] | (static_cast<std::uint64_t>(limbs_[1]) << 32);
  std::uint64_t limit = static_cast<std::uint64_t>(INT64_MAX);
  return v <= limit || (sign() < 0 && v == limit + 1);
}

long long Bigint::to_int64() const {
  if (is_small()) return small_;
  if (!fits_int64()) throw std::overflow_error("Bigint::to_int64: value out of range");
  std::uint64_t v = limbs_[0] | (static_cast<std::uint64_t>(limbs_[1]) << 32);
  if (sign() < 0 && v == static_cast<std::uint64_t>(INT64_MAX) + 1) return INT64_MIN;
  return sign() < 0 ? -static_cast<long long>(v) : static_cast<long long>(v);
}

Bigint Bigint::operator-() const {
  // small_ is either the value (small form) or the sign (big form);
  // negation flips it in both cases
  Bigint r = *this;
  r.small_ = -r.small_;
  return r;
}

Bigint Bigint::abs() const { return sign() < 0 ? -*this : *this; }

int compare(const Bigint& a, const Bigint& b) {
  if (a.is_small() && b.is_small()) {
    return a.small_ < b.small_ ? -1 : (a.small_ > b.small_ ? 1 : 0);
  }
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  int mc = mag_cmp(a.magnitude(), b.magnitude());
  return sa < 0 ? -mc : mc;
}

bool operator==(const Bigint& a, const Bigint& b) { return compare(a, b) == 0; }

std::strong_ordering operator<=>(const Bigint& a, const Bigint& b) {
  int c = compare(a, b);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Bigint operator+(const Bigint& a, const Bigint& b) {
  if (a.is_small() && b.is_small()) {
    return Bigint::from_i128(a.to_i128_unchecked() + b.to_i128_unchecked());
  }
  int sa = a.sign(), sb = b.sign();
  if (sa == 0) return b;
  if (sb == 0) return a;
  Mag ma = a.magnitude(), mb = b.magnitude();
  if (sa == sb) return Bigint::make(sa, mag_add(ma, mb));
  int mc = mag_cmp(ma, mb);
  if (mc == 0) return Bigint();
  return mc > 0 ? Bigint::make(sa, mag_sub(ma, mb)) : Bigint::make(sb, mag_sub(mb, ma));
}

Bigint operator-(const Bigint& a, const Bigint& b) { return a + (-b); }

Bigint operator*(const Bigint& a, const Bigint& b) {
  if (a.is_small() && b.is_small()) {
    return Bigint::from_i128(a.to_i128_unchecked() * b.to_i128_unchecked());
  }
  int s = a.sign() * b.sign();
  if (s == 0) return Bigint();
  return Bigint::make(s, mag_mul(a.magnitude(), b.magnitude()));
}

void Bigint::divmod(const Bigint& a, const Bigint& b, Bigint& q, Bigint& r) {
  if (b.is_zero()) throw std::domain_error("Bigint: division by zero");
  if (a.is_small() && b.is_small()) {
    q = Bigint(a.small_ / b.small_);
    r = Bigint(a.small_ % b.small_);
    return;
  }
  Mag mq, mr;
  mag_divmod(a.magnitude(), b.magnitude(), mq, mr);
  int qs = a.sign() * b.sign();
  q = make(qs, std::move(mq));
  r = make(a.sign(), std::move(mr));
}

Bigint operator/(const Bigint& a, const Bigint& b) {
  Bigint q, r;
  Bigint::divmod(a, b, q, r);
  return q;
}

Bigint operator%(const Bigint& a, const Bigint& b) {
  Bigint q, r;
  Bigint::divmod(a, b, q, r);
  return r;
}

Bigint Bigint::gcd(const Bigint& a, const Bigint& b) {
  if (a.is_small() && b.is_small()) {
    std::uint64_t ga = static_cast<std::uint64_t>(std::llabs(a.small_));
    std::uint64_t gb = static_cast<std::uint64_t>(std::llabs(b.small_));
    return Bigint(static_cast<long long>(std::gcd(ga, gb)));
  }
  return make(1, mag_gcd(a.magnitude(), b.magnitude()));
}

std::string Bigint::to_string() const {
  if (is_small()) return std::to_string(small_);
  Mag m = limbs_;
  std::string digits;
  while (!m.empty()) {
    std::uint32_t chunk = mag_divmod_u32(m, 1000000000u);
    std::string part = std::to_string(chunk);
    if (!m.empty()) part.insert(0, 9 - part.size(), '0');
    digits.insert(0, part);
  }
  return (sign() < 0 ? "-" : "") + digits;
}

Bigint Bigint::from_string(std::string_view s) {
  bool neg = false;
  std::size_t pos = 0;
  if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
    neg = s[pos] == '-';
    ++pos;
  }
  if (pos == s.size()) throw data_error("Bigint: empty integer literal");
  Bigint v(0);
  const Bigint billion(1000000000);
  while (pos < s.size()) {
    std::size_t take = std::min<std::size_t>(9, s.size() - pos);
    long long chunk = 0;
    long long scale = 1;
    for (std::size_t i = 0; i < take; ++i, ++pos) {
      char c = s[pos];
      if (c < '0' || c > '9') throw data_error("Bigint: invalid digit in integer literal");
      chunk = chunk * 10 + (c - '0');
      scale *= 10;
    }
    v = v * (take == 9 ? billion : Bigint(scale)) + Bigint(chunk);
  }
  return neg ? -v : v;
}

Rational::Rational(long long n, long long d) : num_(n), den_(d) { reduce(); }

Rational::Rational(Bigint n, Bigint d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

void Rational::reduce() {
  if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
  if (den_.sign() < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_.is_zero()) {
    den_ = Bigint(1);
    return;
  }
  Bigint g = Bigint::gcd(num_, den_);
  if (g != Bigint(1)) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
}

Rational Rational::operator-() const {
  Rational r = *this;
  r.num_ = -r.num_;
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("Rational: division by zero");
  return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return a.num() * b.den() <=> b.num() * a.den();
}

std::string Rational::to_string() const {
  if (is_integer()) return num_.to_string();
  return num_.to_string() + "/" + den_.to_string();
}

Rational Rational::from_string(std::string_view s) {
  std::size_t slash = s.find('/');
  if (slash == std::string_view::npos) {
    return Rational(Bigint::from_string(s), Bigint(1));
  }
  std::string_view p = s.substr(0, slash), q = s.substr(slash + 1);
  if (q.empty() || q[0] == '-' || q[0] == '+') {
    throw data_error("Rational: denominator must be an unsigned integer");
  }
  Bigint den = Bigint::from_string(q);
  if (den.is_zero()) throw data_error("Rational: zero denominator");
  return Rational(Bigint::from_string(p), std::move(den));
}

}  // namespace coopnet

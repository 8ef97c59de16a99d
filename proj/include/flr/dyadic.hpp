#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace flr {

using BigInt = boost::multiprecision::cpp_int;

// Exact binary-scaled integer: value = mantissa * 2^exponent.
// Canonical form: mantissa odd, or mantissa == 0 with exponent == 0.
// Closed under +, -, *, shift, floor, max; no general division.
class Dyadic {
public:
  Dyadic() = default;
  Dyadic(long long v) : m_(v) { canonicalize(); }
  Dyadic(BigInt mantissa, std::int64_t exponent)
      : m_(std::move(mantissa)), e_(exponent) {
    canonicalize();
  }

  static Dyadic pow2(std::int64_t k) { return Dyadic(BigInt(1), k); }

  const BigInt& mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }

  bool is_zero() const { return m_.is_zero(); }
  bool is_integer() const { return e_ >= 0; }
  int sign() const { return m_.sign(); }
  // Bits right of the binary point in canonical form.
  std::int64_t frac_bits() const { return e_ < 0 ? -e_ : 0; }

  Dyadic operator-() const { return Dyadic(-m_, e_); }
  Dyadic shifted(std::int64_t k) const {
    return is_zero() ? Dyadic() : Dyadic(m_, e_ + k);
  }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic& operator+=(const Dyadic& b) { return *this = *this + b; }
  Dyadic& operator-=(const Dyadic& b) { return *this = *this - b; }
  Dyadic& operator*=(const Dyadic& b) { return *this = *this * b; }

  // Round toward minus infinity to an integer.
  Dyadic floor() const { return Dyadic(floor_int(), 0); }
  BigInt floor_int() const;

  double to_double() const;
  std::string to_string() const;          // "m*2^e"
  std::string to_decimal_string() const;  // exact finite decimal

  friend int compare(const Dyadic& a, const Dyadic& b);
  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.e_ == b.e_ && a.m_ == b.m_;
  }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator<(const Dyadic& a, const Dyadic& b) { return compare(a, b) < 0; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return compare(a, b) <= 0; }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return compare(a, b) > 0; }
  friend bool operator>=(const Dyadic& a, const Dyadic& b) { return compare(a, b) >= 0; }

private:
  void canonicalize();

  BigInt m_ = 0;
  std::int64_t e_ = 0;
};

Dyadic relu(const Dyadic& x);
Dyadic max(const Dyadic& a, const Dyadic& b);
Dyadic abs(const Dyadic& a);

// Finite binary fraction 0.b1 b2 ... bl, leftmost bit first.
class BitString {
public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);

  static BitString parse(const std::string& s);  // characters '0'/'1'
  static BitString random(std::size_t len, std::mt19937_64& rng);
  // Bits of v = k * 2^-len with 0 <= k < 2^len, zero-padded to len.
  static BitString from_value(const Dyadic& v, std::size_t len);

  std::size_t size() const { return bits_.size(); }
  int at(std::size_t i) const;  // 0-based from the left
  void set(std::size_t i, int b);

  Dyadic value() const;  // sum of bits_[i] * 2^-(i+1)
  std::string str() const;

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator!=(const BitString& a, const BitString& b) {
    return !(a == b);
  }

private:
  std::vector<std::uint8_t> bits_;
};

// Contiguous slice of `count` bits starting at 0-based `start`.
BitString oracle_extract(const BitString& s, std::size_t start, std::size_t count);

}  // namespace flr

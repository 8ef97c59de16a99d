#include "flr/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flr {

namespace mp = boost::multiprecision;

void Dyadic::canonicalize() {
  if (m_.is_zero()) {
    e_ = 0;
    return;
  }
  std::size_t k = mp::lsb(m_ < 0 ? BigInt(-m_) : m_);
  if (k > 0) {
    m_ >>= k;
    e_ += static_cast<std::int64_t>(k);
  }
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  std::int64_t e = std::min(a.e_, b.e_);
  BigInt m = (a.m_ << static_cast<std::size_t>(a.e_ - e)) +
             (b.m_ << static_cast<std::size_t>(b.e_ - e));
  return Dyadic(std::move(m), e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  if (a.is_zero() || b.is_zero()) return Dyadic();
  return Dyadic(a.m_ * b.m_, a.e_ + b.e_);
}

BigInt Dyadic::floor_int() const {
  if (e_ >= 0) return m_ << static_cast<std::size_t>(e_);
  std::size_t s = static_cast<std::size_t>(-e_);
  if (m_ >= 0) return m_ >> s;
  // Floor of a negative value: ceiling of the magnitude, negated.
  BigInt mag = -m_;
  BigInt mask = (BigInt(1) << s) - 1;
  return -((mag + mask) >> s);
}

int compare(const Dyadic& a, const Dyadic& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return sa < sb ? -1 : 1;
  if (sa == 0) return 0;
  // Same nonzero sign: compare magnitudes via floor(log2) before shifting.
  std::int64_t la = static_cast<std::int64_t>(mp::msb(a.m_ < 0 ? BigInt(-a.m_) : a.m_)) + a.e_;
  std::int64_t lb = static_cast<std::int64_t>(mp::msb(b.m_ < 0 ? BigInt(-b.m_) : b.m_)) + b.e_;
  if (la != lb) return (la < lb) == (sa > 0) ? -1 : 1;
  Dyadic d = a - b;
  return d.sign();
}

double Dyadic::to_double() const {
  if (is_zero()) return 0.0;
  BigInt mag = m_ < 0 ? BigInt(-m_) : m_;
  std::int64_t nb = static_cast<std::int64_t>(mp::msb(mag)) + 1;
  std::int64_t drop = nb > 64 ? nb - 64 : 0;
  if (drop > 0) mag >>= static_cast<std::size_t>(drop);
  double md = mag.convert_to<double>();
  std::int64_t e = e_ + drop;
  int ec = static_cast<int>(std::clamp<std::int64_t>(e, -(1 << 24), 1 << 24));
  double r = std::ldexp(md, ec);
  return m_ < 0 ? -r : r;
}

std::string Dyadic::to_string() const {
  return m_.str() + "*2^" + std::to_string(e_);
}

std::string Dyadic::to_decimal_string() const {
  if (is_zero()) return "0";
  std::string sign = m_ < 0 ? "-" : "";
  BigInt mag = m_ < 0 ? BigInt(-m_) : m_;
  if (e_ >= 0) return sign + BigInt(mag << static_cast<std::size_t>(e_)).str();
  std::size_t s = static_cast<std::size_t>(-e_);
  if (s > (1u << 20)) return to_string();  // decimal expansion would be wasteful
  BigInt ip = mag >> s;
  BigInt frac = mag - (ip << s);
  if (frac.is_zero()) return sign + ip.str();
  std::string ds = BigInt(frac * mp::pow(BigInt(5), static_cast<unsigned>(s))).str();
  if (ds.size() < s) ds.insert(ds.begin(), s - ds.size(), '0');
  while (ds.size() > 1 && ds.back() == '0') ds.pop_back();
  return sign + ip.str() + "." + ds;
}

Dyadic relu(const Dyadic& x) { return x.sign() > 0 ? x : Dyadic(); }

Dyadic max(const Dyadic& a, const Dyadic& b) { return compare(a, b) >= 0 ? a : b; }

Dyadic abs(const Dyadic& a) { return a.sign() < 0 ? -a : a; }

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto b : bits_)
    if (b > 1) throw std::invalid_argument("BitString: bits must be 0 or 1");
}

BitString BitString::parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("BitString: empty string");
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1')
      throw std::invalid_argument("BitString: invalid character in \"" + s + "\"");
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BitString(std::move(bits));
}

BitString BitString::random(std::size_t len, std::mt19937_64& rng) {
  std::vector<std::uint8_t> bits(len);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
  return BitString(std::move(bits));
}

BitString BitString::from_value(const Dyadic& v, std::size_t len) {
  if (v.sign() < 0 || v.frac_bits() > static_cast<std::int64_t>(len))
    throw std::invalid_argument("BitString::from_value: not a multiple of 2^-len in [0,1)");
  BigInt k = v.shifted(static_cast<std::int64_t>(len)).floor_int();
  if (k < 0 || k >= (BigInt(1) << len))
    throw std::invalid_argument("BitString::from_value: value out of [0,1)");
  std::vector<std::uint8_t> bits(len);
  for (std::size_t i = 0; i < len; ++i)
    bits[len - 1 - i] = static_cast<std::uint8_t>(mp::bit_test(k, static_cast<unsigned>(i)) ? 1 : 0);
  return BitString(std::move(bits));
}

int BitString::at(std::size_t i) const {
  if (i >= bits_.size()) throw std::out_of_range("BitString::at");
  return bits_[i];
}

void BitString::set(std::size_t i, int b) {
  if (i >= bits_.size()) throw std::out_of_range("BitString::set");
  if (b != 0 && b != 1) throw std::invalid_argument("BitString::set: bit must be 0 or 1");
  bits_[i] = static_cast<std::uint8_t>(b);
}

Dyadic BitString::value() const {
  BigInt m = 0;
  for (auto b : bits_) m = (m << 1) + b;
  return Dyadic(std::move(m), -static_cast<std::int64_t>(bits_.size()));
}

std::string BitString::str() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

BitString oracle_extract(const BitString& s, std::size_t start, std::size_t count) {
  if (start + count > s.size())
    throw std::out_of_range("oracle_extract: slice past end");
  std::vector<std::uint8_t> bits(count);
  for (std::size_t i = 0; i < count; ++i)
    bits[i] = static_cast<std::uint8_t>(s.at(start + i));
  return BitString(std::move(bits));
}

}  // namespace flr

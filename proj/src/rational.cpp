#include "flr/rational.hpp"

#include <stdexcept>

namespace flr {

namespace mp = boost::multiprecision;

Rational to_rational(const Dyadic& d) {
  if (d.exponent() >= 0)
    return Rational(d.mantissa() << static_cast<std::size_t>(d.exponent()));
  return Rational(d.mantissa(), BigInt(1) << static_cast<std::size_t>(-d.exponent()));
}

Rational pow2_rational(std::int64_t k) {
  if (k >= 0) return Rational(BigInt(1) << static_cast<std::size_t>(k));
  return Rational(1, BigInt(1) << static_cast<std::size_t>(-k));
}

bool is_dyadic(const Rational& q) {
  BigInt d = den(q);
  if (d == 1) return true;
  return mp::lsb(d) == mp::msb(d);  // exactly one bit set
}

Dyadic to_dyadic_exact(const Rational& q) {
  BigInt d = den(q);
  if (d == 1) return Dyadic(num(q), 0);
  if (!is_dyadic(q)) throw std::invalid_argument("to_dyadic_exact: denominator not a power of two");
  return Dyadic(num(q), -static_cast<std::int64_t>(mp::lsb(d)));
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  if (b <= 0) throw std::invalid_argument("floor_div: divisor must be positive");
  BigInt q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

Dyadic dyadic_floor(const Rational& q, std::int64_t frac_bits) {
  if (frac_bits < 0) throw std::invalid_argument("dyadic_floor: negative frac_bits");
  BigInt scaled = floor_div(num(q) << static_cast<std::size_t>(frac_bits), den(q));
  return Dyadic(std::move(scaled), -frac_bits);
}

Dyadic dyadic_ceil(const Rational& q, std::int64_t frac_bits) {
  return -dyadic_floor(-q, frac_bits);
}

Dyadic dyadic_nearest(const Rational& q, std::int64_t frac_bits) {
  if (frac_bits < 0) throw std::invalid_argument("dyadic_nearest: negative frac_bits");
  // floor(q*2^b + 1/2), with the tie pushed away from zero for negative q.
  BigInt n2 = num(q) << static_cast<std::size_t>(frac_bits + 1);
  BigInt d = den(q);
  BigInt scaled = q >= 0 ? floor_div(n2 + d, 2 * d) : -floor_div(-n2 + d, 2 * d);
  return Dyadic(std::move(scaled), -frac_bits);
}

Dyadic round_up_dyadic(const Rational& x, std::int64_t frac_bits) {
  if (x < 0) throw std::invalid_argument("round_up_dyadic: negative input");
  return dyadic_ceil(x, frac_bits);
}

double to_double(const Rational& q) {
  if (q == 0) return 0.0;
  BigInt n = num(q) < 0 ? BigInt(-num(q)) : num(q);
  std::int64_t e = static_cast<std::int64_t>(mp::msb(n)) -
                   static_cast<std::int64_t>(mp::msb(den(q)));
  // q / 2^e lands near 1, so 96 fractional bits preserve full precision.
  Dyadic scaled = dyadic_nearest(q * pow2_rational(-e), 96);
  return scaled.shifted(e).to_double();
}

}  // namespace flr

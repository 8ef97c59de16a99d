#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "flr/dyadic.hpp"

namespace flr {

// Exact fractions for the measurement and bound side of the library.
// Network weights and activations stay Dyadic; rationals appear only where
// sample coordinates or certified bounds are computed.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& q) { return numerator(q); }
inline BigInt den(const Rational& q) { return denominator(q); }

Rational to_rational(const Dyadic& d);
Rational pow2_rational(std::int64_t k);  // 2^k as an exact fraction

bool is_dyadic(const Rational& q);           // denominator a power of two
Dyadic to_dyadic_exact(const Rational& q);   // throws unless is_dyadic

// floor(a / b) for b > 0, rounding toward minus infinity.
BigInt floor_div(const BigInt& a, const BigInt& b);

// Directed rounding to the grid of multiples of 2^-frac_bits.
Dyadic dyadic_floor(const Rational& q, std::int64_t frac_bits);
Dyadic dyadic_ceil(const Rational& q, std::int64_t frac_bits);
Dyadic dyadic_nearest(const Rational& q, std::int64_t frac_bits);  // ties away from zero

// Smallest multiple of 2^-frac_bits that is >= x.  Rejects negative x.
Dyadic round_up_dyadic(const Rational& x, std::int64_t frac_bits);

double to_double(const Rational& q);

}  // namespace flr

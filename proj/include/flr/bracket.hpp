#pragma once

#include "flr/rational.hpp"

namespace flr {

// Certified enclosure of a real number: lo <= x <= hi, both exact rationals.
// Every operation below rounds outward, so enclosures stay valid; `bits`
// controls the width of the result (roughly hi - lo <= 2^-bits for the
// bounded quantities this library evaluates).
struct Interval {
  Rational lo, hi;

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
};

Interval ival_point(const Rational& x);
Interval ival_add(const Interval& a, const Interval& b);
Interval ival_sub(const Interval& a, const Interval& b);
Interval ival_neg(const Interval& a);
Interval ival_mul(const Interval& a, const Interval& b);
Interval ival_scale(const Interval& a, const Rational& c);
Interval ival_scale_int(const Interval& a, const BigInt& c);
// 1/a for intervals that do not contain zero.
Interval ival_recip(const Interval& a);
// Outward rounding to dyadics with `bits` fractional bits; tames the growth
// of numerators and denominators between stages.
Interval ival_compress(const Interval& a, std::int64_t bits);

// floor(x^(1/k)) for x >= 0, k >= 1.
BigInt iroot_floor(const BigInt& x, unsigned k);

// sqrt(x) for x >= 0; exact (lo == hi) when x is a square of a rational.
Interval sqrt_ival(const Rational& x, std::int64_t bits);
// x^(1/k) for x >= 0, k >= 1; exact on perfect k-th powers.
Interval root_ival(const Rational& x, unsigned k, std::int64_t bits);
// x^alpha for x inside a nonnegative interval and rational alpha >= 0 whose
// denominator is small; exact when alpha is a nonnegative integer.
Interval pow_ival(const Interval& x, const Rational& alpha, std::int64_t bits);

// Natural log enclosures.  ln2_ival caches its series.
Interval ln2_ival(std::int64_t bits);
Interval ln_ival(const Rational& x, std::int64_t bits);   // x > 0
Interval ln_ival(const Interval& x, std::int64_t bits);   // x.lo > 0
Interval exp_ival(const Rational& y, std::int64_t bits);
Interval exp_ival(const Interval& y, std::int64_t bits);

// N^-t for integer N >= 1 and an enclosure t >= 0.  Exact when N == 1 or
// t is an exact integer.
Interval pow_decay_ival(long N, const Interval& t, std::int64_t bits);

}  // namespace flr

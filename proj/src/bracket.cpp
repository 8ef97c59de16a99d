#include "flr/bracket.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flr {

namespace mp = boost::multiprecision;

Interval ival_point(const Rational& x) { return {x, x}; }

Interval ival_add(const Interval& a, const Interval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

Interval ival_sub(const Interval& a, const Interval& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}

Interval ival_neg(const Interval& a) { return {-a.hi, -a.lo}; }

Interval ival_mul(const Interval& a, const Interval& b) {
  Rational p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

Interval ival_scale(const Interval& a, const Rational& c) {
  if (c >= 0) return {a.lo * c, a.hi * c};
  return {a.hi * c, a.lo * c};
}

Interval ival_scale_int(const Interval& a, const BigInt& c) {
  return ival_scale(a, Rational(c));
}

Interval ival_recip(const Interval& a) {
  if (a.lo <= 0 && a.hi >= 0)
    throw std::domain_error("ival_recip: interval contains zero");
  return {1 / a.hi, 1 / a.lo};
}

Interval ival_compress(const Interval& a, std::int64_t bits) {
  return {to_rational(dyadic_floor(a.lo, bits)),
          to_rational(dyadic_ceil(a.hi, bits))};
}

BigInt iroot_floor(const BigInt& x, unsigned k) {
  if (x < 0) throw std::invalid_argument("iroot_floor: negative input");
  if (k == 0) throw std::invalid_argument("iroot_floor: zeroth root");
  if (k == 1 || x <= 1) return x;
  if (k == 2) return mp::sqrt(x);
  std::int64_t bits = static_cast<std::int64_t>(mp::msb(x)) + 1;
  BigInt r = BigInt(1) << static_cast<std::size_t>((bits + k - 1) / k);
  while (true) {
    BigInt rk1 = mp::pow(r, k - 1);
    BigInt next = ((k - 1) * r + x / rk1) / k;
    if (next >= r) break;
    r = next;
  }
  while (mp::pow(r, k) > x) --r;
  while (mp::pow(r + 1, k) <= x) ++r;
  return r;
}

Interval sqrt_ival(const Rational& x, std::int64_t bits) {
  return root_ival(x, 2, bits);
}

Interval root_ival(const Rational& x, unsigned k, std::int64_t bits) {
  if (x < 0) throw std::domain_error("root_ival: negative input");
  if (k == 0) throw std::invalid_argument("root_ival: zeroth root");
  if (x == 0) return {0, 0};
  BigInt n = num(x), d = den(x);
  // (n/d)^(1/k) = (n * d^(k-1))^(1/k) / d
  BigInt body = n * mp::pow(d, k - 1);
  BigInt M = BigInt(1) << static_cast<std::size_t>(bits);
  BigInt scaled = body * mp::pow(M, k);
  BigInt r = iroot_floor(scaled, k);
  Rational lo(r, d * M);
  if (mp::pow(r, k) == scaled) return {lo, lo};
  return {lo, Rational(r + 1, d * M)};
}

Interval pow_ival(const Interval& x, const Rational& alpha, std::int64_t bits) {
  if (x.lo < 0) throw std::domain_error("pow_ival: negative base");
  if (alpha < 0) throw std::domain_error("pow_ival: negative exponent");
  if (alpha == 0) return {1, 1};
  BigInt a = num(alpha), b = den(alpha);
  if (a > 4096 || b > 4096)
    throw std::invalid_argument("pow_ival: exponent terms too large");
  unsigned ia = a.convert_to<unsigned>(), ib = b.convert_to<unsigned>();
  auto powr = [&](const Rational& v) {
    return Rational(mp::pow(num(v), ia), mp::pow(den(v), ia));
  };
  if (ib == 1) return {powr(x.lo), powr(x.hi)};
  // x^(a/b) is nondecreasing in x for alpha >= 0.
  return {root_ival(powr(x.lo), ib, bits).lo, root_ival(powr(x.hi), ib, bits).hi};
}

namespace {

Rational rat_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

// 2*atanh(z) as a certified enclosure; requires z^2 <= 1/9.
Interval atanh2_ival(const Rational& z, std::int64_t bits) {
  if (z == 0) return {0, 0};
  Rational z2 = z * z;
  if (z2 > Rational(1, 9)) throw std::domain_error("atanh2_ival: |z| too large");
  Rational eps = pow2_rational(-(bits + 4));
  Rational sum = 0, term = z;  // term = z^(2k+1)
  long k = 0;
  while (true) {
    sum += term / (2 * k + 1);
    Rational next = term * z2;
    // Remaining terms are bounded by |next|/(2k+3) * 1/(1-z^2) <= 9/8 * ...
    Rational tail = rat_abs(next) / (2 * k + 3) * Rational(9, 8);
    if (tail <= eps) return {2 * (sum - tail), 2 * (sum + tail)};
    term = next;
    ++k;
  }
}

// exp(r) enclosure for |r| <= 3/4.
Interval exp_small_ival(const Rational& r, std::int64_t bits) {
  if (r == 0) return {1, 1};
  if (rat_abs(r) > Rational(3, 4)) throw std::domain_error("exp_small_ival: |r| too large");
  Rational eps = pow2_rational(-(bits + 4));
  Rational sum = 1, term = 1;
  long k = 1;
  while (true) {
    term = term * r / k;
    sum += term;
    // |remaining| <= |term| * |r|/(k+1) * 4/3 since |r|/(k+2) <= 1/4.
    Rational tail = rat_abs(term) * rat_abs(r) / (k + 1) * Rational(4, 3);
    if (tail <= eps) return {sum - tail, sum + tail};
    ++k;
  }
}

}  // namespace

Interval ln2_ival(std::int64_t bits) {
  static Interval cache = atanh2_ival(Rational(1, 3), 256);
  static std::int64_t cache_bits = 256;
  if (bits > cache_bits) {
    cache = atanh2_ival(Rational(1, 3), bits);
    cache_bits = bits;
  }
  return cache;
}

Interval ln_ival(const Rational& x, std::int64_t bits) {
  if (x <= 0) throw std::domain_error("ln_ival: nonpositive input");
  if (x == 1) return {0, 0};
  std::int64_t e = static_cast<std::int64_t>(mp::msb(num(x))) -
                   static_cast<std::int64_t>(mp::msb(den(x)));
  Rational m = x * pow2_rational(-e);
  while (m >= Rational(3, 2)) { m /= 2; ++e; }
  while (m < Rational(3, 4)) { m *= 2; --e; }
  // ln m = 2*atanh((m-1)/(m+1)) with |z| <= 1/5 on [3/4, 3/2).
  Interval lm = (m == 1) ? Interval{0, 0}
                         : atanh2_ival((m - 1) / (m + 1), bits + 4);
  if (e == 0) return ival_compress(lm, bits + 2);
  Interval el2 = ival_scale_int(ln2_ival(bits + 72), BigInt(e));
  return ival_compress(ival_add(el2, lm), bits + 2);
}

Interval ln_ival(const Interval& x, std::int64_t bits) {
  return {ln_ival(x.lo, bits).lo, ln_ival(x.hi, bits).hi};
}

Interval exp_ival(const Rational& y, std::int64_t bits) {
  return exp_ival(ival_point(y), bits);
}

Interval exp_ival(const Interval& y, std::int64_t bits) {
  if (y.lo == 0 && y.hi == 0) return {1, 1};
  Interval l2 = ln2_ival(bits + 80);
  long long t = std::llround(to_double(y.mid()) / 0.6931471805599453);
  Interval r = ival_sub(y, ival_scale_int(l2, BigInt(t)));
  while (r.hi > Rational(3, 4)) { ++t; r = ival_sub(r, l2); }
  while (r.lo < Rational(-3, 4)) { --t; r = ival_add(r, l2); }
  Interval er = {exp_small_ival(r.lo, bits + 6).lo,
                 exp_small_ival(r.hi, bits + 6).hi};
  return ival_compress(ival_scale(er, pow2_rational(t)), bits + 2);
}

Interval pow_decay_ival(long N, const Interval& t, std::int64_t bits) {
  if (N < 1) throw std::invalid_argument("pow_decay_ival: N must be >= 1");
  if (t.lo < 0) throw std::domain_error("pow_decay_ival: negative exponent");
  if (N == 1) return {1, 1};
  if (t.exact() && den(t.lo) == 1) {
    if (num(t.lo) > 4096) throw std::invalid_argument("pow_decay_ival: exponent too large");
    Rational p(1, mp::pow(BigInt(N), num(t.lo).convert_to<unsigned>()));
    return {p, p};
  }
  std::int64_t wb = bits + 16;
  Interval lnN = ln_ival(Rational(N), wb + 8);
  // t >= 0 and ln N >= 0, so t*lnN = [t.lo*lnN.lo, t.hi*lnN.hi].
  Interval prod = {t.lo * lnN.lo, t.hi * lnN.hi};
  return exp_ival(ival_neg(prod), wb);
}

}  // namespace flr

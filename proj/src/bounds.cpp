#include "flr/bounds.hpp"

#include <stdexcept>

namespace flr {

namespace mp = boost::multiprecision;

namespace {

void check_sizes(int d, long N, long L) {
  if (d < 1) throw std::invalid_argument("bounds: dimension must be >= 1");
  if (N < 1 || L < 1) throw std::invalid_argument("bounds: N and L must be >= 1");
}

Rational checked_neg_pow(long N, const BigInt& e) {
  if (e > 1 << 20) throw std::invalid_argument("bounds: exponent too large");
  return Rational(1, mp::pow(BigInt(N), e.convert_to<unsigned>()));
}

}  // namespace

Interval root_exp_decay(long N, long L, std::int64_t bits) {
  return pow_decay_ival(N, sqrt_ival(Rational(L), bits + 8), bits);
}

Dyadic two_term_bound(const ModulusSpec& omega, int d, const Interval& radius_factor,
                      const Interval& quant_factor, int guard_bits) {
  std::int64_t wb = guard_bits + 16;
  Interval sd = sqrt_ival(Rational(d), wb);
  Dyadic term1 = dyadic_ceil(omega.eval(ival_mul(sd, radius_factor), wb).hi, guard_bits);
  Rational omega_d = omega.eval(sd, wb).hi;
  Dyadic term2 = dyadic_ceil(2 * omega_d * quant_factor.hi, guard_bits);
  return term1 + term2;
}

Dyadic bound_direct(const ModulusSpec& omega, int d, long N, long L, int guard_bits) {
  check_sizes(d, N, L);
  Rational u = checked_neg_pow(N, BigInt(L));
  Rational q = pow2_rational(-static_cast<std::int64_t>(N) * L);
  return two_term_bound(omega, d, ival_point(u), ival_point(q), guard_bits);
}

Dyadic bound_root_exp(const ModulusSpec& omega, int d, long N, long L, int guard_bits) {
  check_sizes(d, N, L);
  Interval u = root_exp_decay(N, L, guard_bits + 16);
  return two_term_bound(omega, d, u, u, guard_bits);
}

Dyadic bound_from_raw_sizes(const ModulusSpec& omega, int d, long W, long D, int guard_bits) {
  if (d < 1) throw std::invalid_argument("bounds: dimension must be >= 1");
  if (W < std::max<long>(d, 18) || D < 64L * d + 3)
    throw std::invalid_argument("bound_from_raw_sizes: needs W >= max(d, 18) and D >= 64d+3");
  long N = (W - 13) / 5;
  long L = (D - 3) / (64L * d);
  return bound_root_exp(omega, d, N, L, guard_bits);
}

Dyadic bound_holder_rate(const Rational& lambda, const Rational& alpha, int d,
                         long N, long L, int guard_bits) {
  check_sizes(d, N, L);
  if (lambda < 0 || alpha <= 0 || alpha > 1)
    throw std::invalid_argument("bound_holder_rate: need lambda >= 0, alpha in (0, 1]");
  std::int64_t wb = guard_bits + 16;
  // 3 lambda d^(alpha/2) N^(-alpha sqrt(L))
  Interval dpow = pow_ival(ival_point(Rational(d)), alpha / 2, wb);
  Interval t = ival_scale(sqrt_ival(Rational(L), wb + 8), alpha);
  Interval decay = pow_decay_ival(N, t, wb);
  Interval v = ival_scale(ival_mul(dpow, decay), 3 * lambda);
  return dyadic_ceil(v.hi, guard_bits);
}

BudgetRate bound_parameter_budget(const ModulusSpec& omega, int d, long W, int guard_bits) {
  if (d < 1 || W < 1) throw std::invalid_argument("bound_parameter_budget: bad arguments");
  BudgetRate r;
  r.width = std::max<long>(d, 23);
  r.depth = 64L * d * W + 3;
  r.bound = bound_root_exp(omega, d, 2, W, guard_bits);
  return r;
}

ExampleRate modulus_example_rate(RateKind kind, int d, long N, long L,
                                 const Rational& alpha, int guard_bits) {
  check_sizes(d, N, L);
  std::int64_t wb = guard_bits + 16;
  ExampleRate out;
  switch (kind) {
    case RateKind::log_reciprocal:
    case RateKind::log_reciprocal_root: {
      // 3 / (sqrt(L) ln N - ln(d)/2), raised to 1/d for the root variant.
      Interval s = sqrt_ival(Rational(L), wb + 8);
      Interval lnN = ln_ival(Rational(N), wb + 8);
      Interval lnd = d == 1 ? Interval{0, 0} : ln_ival(Rational(d), wb + 8);
      Interval denom = ival_sub(Interval{s.lo * lnN.lo, s.hi * lnN.hi},
                                ival_scale(lnd, Rational(1, 2)));
      if (denom.lo <= 0)
        throw std::domain_error("modulus_example_rate: sqrt(L) ln N must exceed ln(d)/2");
      Interval v = ival_scale(ival_recip(denom), 3);
      if (kind == RateKind::log_reciprocal_root && d > 1)
        v = {root_ival(v.lo, static_cast<unsigned>(d), wb).lo,
             root_ival(v.hi, static_cast<unsigned>(d), wb).hi};
      out.value = dyadic_ceil(v.hi, guard_bits);
      out.asymptotic = true;
      return out;
    }
    case RateKind::power_over_dim: {
      out.value = bound_holder_rate(1, alpha / d, d, N, L, guard_bits);
      out.asymptotic = false;
      return out;
    }
  }
  throw std::logic_error("modulus_example_rate: unknown kind");
}

}  // namespace flr

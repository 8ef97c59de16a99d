#pragma once

#include "flr/modulus.hpp"

namespace flr {

// Certified upper bounds for the approximation error of the two compile
// paths, as functions of the declared modulus and the size parameters.
// Every value is rounded up, so increasing guard_bits can only tighten the
// result (never below the true supremum of the formula).

// Direct path: omega(sqrt(d) * N^-L) + 2*omega(sqrt(d)) * 2^-(N L).
Dyadic bound_direct(const ModulusSpec& omega, int d, long N, long L, int guard_bits);

// Root-exponent path: omega(sqrt(d) * N^-sqrt(L)) + 2*omega(sqrt(d)) * N^-sqrt(L).
Dyadic bound_root_exp(const ModulusSpec& omega, int d, long N, long L, int guard_bits);

// Raw width/depth budgets: with N = floor((W - 13)/5), L = floor((D - 3)/(64 d)),
// the root-exponent bound applies to any width-W depth-D realization.
// Requires W >= max(d, 18) and D >= 64 d + 3.
Dyadic bound_from_raw_sizes(const ModulusSpec& omega, int d, long W, long D, int guard_bits);

// Closed form for Holder targets: 3 * lambda * d^(alpha/2) * N^(-alpha*sqrt(L)).
Dyadic bound_holder_rate(const Rational& lambda, const Rational& alpha, int d,
                         long N, long L, int guard_bits);

// Fixed width budget max(d, 23) with depth 64 d W + 3: the root-exponent
// bound at N = 2, L = W, plus the realized budget numbers.
struct BudgetRate {
  Dyadic bound;
  long width = 0;
  long depth = 0;
};
BudgetRate bound_parameter_budget(const ModulusSpec& omega, int d, long W, int guard_bits);

// Rates realized by three reference moduli.  The values are exact formula
// evaluations; `asymptotic` flags rates whose derivation holds only for
// large N, L (reported verbatim, caveat included).
enum class RateKind : std::uint8_t {
  log_reciprocal,       // 3 / (sqrt(L) ln N - ln(d)/2)
  log_reciprocal_root,  // the same, raised to 1/d
  power_over_dim,       // 3 d^(alpha/(2d)) N^(-(alpha/d) sqrt(L))
};
struct ExampleRate {
  Dyadic value;
  bool asymptotic = false;
};
ExampleRate modulus_example_rate(RateKind kind, int d, long N, long L,
                                 const Rational& alpha, int guard_bits);

// Enclosure of N^-sqrt(L); exact when L is a perfect square and N a power
// of two.  Shared by the calculators and the compilers.
Interval root_exp_decay(long N, long L, std::int64_t bits);

// The two bound terms that certificates carry:
//   omega(sqrt(d) * radius_factor) + 2 * omega(sqrt(d)) * quant_factor.
Dyadic two_term_bound(const ModulusSpec& omega, int d, const Interval& radius_factor,
                      const Interval& quant_factor, int guard_bits);

}  // namespace flr

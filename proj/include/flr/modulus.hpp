#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flr/bracket.hpp"

namespace flr {

// Declared upper bound on a modulus of continuity: a nondecreasing function
// omega with omega(0) = 0 such that |f(x) - f(y)| <= omega(|x - y|_2).
// Evaluation yields certified enclosures; only upper ends are consumed by
// bound calculators, so a spec that overstates omega stays sound.
class ModulusSpec {
public:
  enum class Kind : std::uint8_t { zero, holder, log_reciprocal, table };

  static ModulusSpec zero();
  // omega(r) = lambda * r^alpha with 0 < alpha <= 1.
  static ModulusSpec holder(const Rational& lambda, const Rational& alpha);
  // omega(r) = coef * sqrt(sqrt_arg) * r^alpha; keeps square-root factors
  // exact-symbolic so perfect squares collapse without rounding.
  static ModulusSpec holder_sqrt(const Rational& coef, const Rational& sqrt_arg,
                                 const Rational& alpha);
  static ModulusSpec lipschitz(const Rational& lambda);
  static ModulusSpec lipschitz_sqrt(const Rational& coef, const Rational& sqrt_arg);
  // omega(r) = r^(alpha/d).
  static ModulusSpec holder_over_dim(const Rational& alpha, int d);
  // omega(r) = (1 / ln(1/r))^(1/root); defined for scaled radii below 1/2.
  static ModulusSpec log_reciprocal(int root = 1);
  // Staircase upper bound through sorted breakpoints (r_i, w_i).
  static ModulusSpec from_table(std::vector<std::pair<Rational, Rational>> steps);

  // omega'(r) = omega(scale * r); composes.
  ModulusSpec scaled_radius(const Rational& scale) const;

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::zero; }
  const Rational& radius_scale() const { return radius_scale_; }
  const Rational& alpha() const { return alpha_; }

  // Certified enclosure of omega over a radius enclosure r >= 0.
  Interval eval(const Interval& r, std::int64_t bits) const;
  // Certified upper bound rounded up to `bits` fractional bits.
  Dyadic upper(const Rational& r, std::int64_t bits) const;

  std::string describe() const;

  // "zero" | "lipschitz:L" | "holder:ALPHA:L" | "holder-over-dim:ALPHA:D" |
  // "log" | "log-root:D"  (rationals as "p" or "p/q")
  static ModulusSpec parse(const std::string& text);

private:
  ModulusSpec() = default;

  Kind kind_ = Kind::zero;
  Rational coef_ = 1;
  Rational sqrt_arg_ = 1;
  Rational alpha_ = 1;
  int root_ = 1;
  Rational radius_scale_ = 1;
  std::vector<std::pair<Rational, Rational>> table_;
};

Rational parse_rational(const std::string& text);

}  // namespace flr

#include "flr/bounds.hpp"

#include "helpers.hpp"

using namespace flr;
using namespace flr::testing;

namespace {

Rational rat(const Dyadic& v) { return to_rational(v); }

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("root-exponent path frozen values") {
  ModulusSpec lip = ModulusSpec::lipschitz(1);
  CHECK(bound_root_exp(lip, 1, 2, 4, 64) == D(3, -2));
  CHECK(bound_root_exp(ModulusSpec::zero(), 3, 2, 4, 64) == Dyadic(0));
  // Holder 1/2: omega(1) + 2*omega(2)/2 = 1 + sqrt(2), certified below 3
  ModulusSpec hold = ModulusSpec::holder(1, R(1, 2));
  Dyadic h = bound_root_exp(hold, 4, 2, 1, 64);
  CHECK(rat(h) <= R(3));
  CHECK(rat(h) >= R(1) + R(14142, 10000));
  CHECK(rat(h) <= R(1) + R(14143, 10000));
}

TEST_CASE("direct path frozen values") {
  ModulusSpec lip = ModulusSpec::lipschitz(1);
  CHECK(bound_direct(lip, 1, 2, 2, 64) == D(3, -3));
  // N=3: 1/3 + 1/4 = 7/12, certified within 2^-60
  Dyadic v = bound_direct(lip, 1, 3, 1, 64);
  CHECK(rat(v) >= R(7, 12));
  CHECK(rat(v) - R(7, 12) <= pow2_rational(-60));
  // monotone in L
  Dyadic l2 = bound_direct(lip, 1, 2, 2, 64);
  Dyadic l4 = bound_direct(lip, 1, 2, 4, 64);
  Dyadic l8 = bound_direct(lip, 1, 2, 8, 64);
  CHECK(l4 < l2);
  CHECK(l8 < l4);
  CHECK(rat(l8) < R(1, 100));
}

TEST_CASE("root-exponent bound is monotone in L") {
  ModulusSpec lip = ModulusSpec::lipschitz(1);
  for (long N : {2L, 3L, 5L}) {
    Dyadic prev = bound_root_exp(lip, 2, N, 1, 64);
    for (long L = 2; L <= 12; ++L) {
      Dyadic cur = bound_root_exp(lip, 2, N, L, 64);
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}

TEST_CASE("raw sizes") {
  ModulusSpec lip = ModulusSpec::lipschitz(1);
  // N_bar=18, L_bar=67, d=1 -> N=1, L=1: u=1, bound = 3*lambda
  CHECK(bound_from_raw_sizes(lip, 1, 18, 67, 64) == Dyadic(3));
  // N_bar=23 -> N=2
  CHECK(bound_from_raw_sizes(lip, 1, 23, 67, 64) == bound_root_exp(lip, 1, 2, 1, 64));
  CHECK_THROWS(bound_from_raw_sizes(lip, 1, 17, 67, 64));
  CHECK_THROWS(bound_from_raw_sizes(lip, 1, 18, 66, 64));
  CHECK_THROWS(bound_from_raw_sizes(lip, 19, 18, 64 * 19 + 3, 64));
  // nonincreasing scan over N_bar at fixed L_bar
  Dyadic prev = bound_from_raw_sizes(lip, 1, 18, 67, 64);
  for (long W = 19; W <= 48; ++W) {
    Dyadic cur = bound_from_raw_sizes(lip, 1, W, 67, 64);
    CHECK(cur <= prev);
    prev = cur;
  }
}

TEST_CASE("holder closed form") {
  CHECK(bound_holder_rate(R(1), R(1), 1, 2, 4, 64) == D(3, -2));
  CHECK(bound_holder_rate(R(1), R(1), 4, 2, 1, 64) == Dyadic(3));
  // N=1: no decay, 3*lambda*d^(alpha/2)
  CHECK(bound_holder_rate(R(1), R(1), 1, 1, 5, 64) == Dyadic(3));
  CHECK(bound_holder_rate(R(2), R(1), 4, 1, 9, 64) == Dyadic(12));
  CHECK_THROWS(bound_holder_rate(R(1), R(0), 1, 2, 1, 64));
  CHECK_THROWS(bound_holder_rate(R(1), R(3, 2), 1, 2, 1, 64));
  CHECK_THROWS(bound_holder_rate(R(-1), R(1), 1, 2, 1, 64));
}

TEST_CASE("closed form agrees with the two-term bound under an exact Holder modulus") {
  // Lipschitz: omega(sqrt(d) u) + 2 omega(sqrt(d)) u = 3 sqrt(d) u = closed form
  Dyadic a = bound_root_exp(ModulusSpec::lipschitz(1), 1, 2, 4, 64);
  Dyadic b = bound_holder_rate(R(1), R(1), 1, 2, 4, 64);
  CHECK(a == b);
  Dyadic c = bound_root_exp(ModulusSpec::lipschitz(1), 2, 2, 2, 96);
  Dyadic d = bound_holder_rate(R(1), R(1), 2, 2, 2, 96);
  Rational diff = rat(c) - rat(d);
  if (diff < 0) diff = -diff;
  CHECK(diff <= pow2_rational(-90));
}

TEST_CASE("parameter budget") {
  ModulusSpec lip = ModulusSpec::lipschitz(1);
  BudgetRate r = bound_parameter_budget(lip, 1, 4, 64);
  CHECK(r.bound == D(3, -2));
  CHECK(r.width == 23);
  CHECK(r.depth == 64 * 4 + 3);
  CHECK(bound_parameter_budget(lip, 30, 2, 64).width == 30);
  CHECK(bound_parameter_budget(lip, 1, 1, 64).depth == 67);
}

TEST_CASE("reference modulus rates") {
  // 3 / (sqrt(L) ln N - ln(d)/2) at d=1, N=3, L=4: 3/(2 ln 3) = 1.36536...
  ExampleRate log1 = modulus_example_rate(RateKind::log_reciprocal, 1, 3, 4, R(1), 64);
  CHECK(log1.asymptotic);
  CHECK(rat(log1.value) >= R(136535, 100000));
  CHECK(rat(log1.value) <= R(136537, 100000));
  // the formula passes through 3/2 between N=2 and N=3 (N = e gives exactly 3/2)
  ExampleRate log2 = modulus_example_rate(RateKind::log_reciprocal, 1, 2, 4, R(1), 64);
  CHECK(rat(log2.value) > R(3, 2));
  CHECK(rat(log1.value) < R(3, 2));
  // d=1 root variant equals the plain log rate
  ExampleRate root1 = modulus_example_rate(RateKind::log_reciprocal_root, 1, 3, 4, R(1), 64);
  CHECK(root1.value == log1.value);
  // power kind at d=1 reduces to the Holder closed form
  ExampleRate pw = modulus_example_rate(RateKind::power_over_dim, 1, 2, 4, R(1), 64);
  CHECK(!pw.asymptotic);
  CHECK(pw.value == bound_holder_rate(R(1), R(1), 1, 2, 4, 64));
  // the log rate needs sqrt(L) ln N > ln(d)/2
  CHECK_THROWS_AS(modulus_example_rate(RateKind::log_reciprocal, 8, 2, 1, R(1), 64),
                  std::domain_error);
}

TEST_CASE("guard precision tightens monotonically") {
  ModulusSpec lip = ModulusSpec::lipschitz(1);
  Dyadic v32 = bound_direct(lip, 1, 3, 1, 32);
  Dyadic v64 = bound_direct(lip, 1, 3, 1, 64);
  CHECK(v64 <= v32);
  CHECK(rat(v32) - rat(v64) <= pow2_rational(-31));
  Dyadic w32 = bound_root_exp(lip, 2, 3, 5, 32);
  Dyadic w64 = bound_root_exp(lip, 2, 3, 5, 64);
  CHECK(w64 <= w32);
  CHECK(rat(w32) - rat(w64) <= pow2_rational(-31));
}

TEST_CASE("root_exp_decay encloses its target") {
  Interval u = root_exp_decay(2, 4, 64);
  CHECK(u.exact());
  CHECK(u.lo == R(1, 4));
  Interval v = root_exp_decay(2, 2, 64);
  // 2^-sqrt(2) = 0.37521422...
  CHECK(v.lo > R(37521, 100000));
  CHECK(v.hi < R(37522, 100000));
  Interval one = root_exp_decay(1, 7, 64);
  CHECK(one.exact());
  CHECK(one.lo == R(1));
}

TEST_CASE("two_term_bound zero modulus") {
  Interval u{R(1, 4), R(1, 4)};
  CHECK(two_term_bound(ModulusSpec::zero(), 2, u, u, 64) == Dyadic(0));
}

TEST_CASE("modulus parsing and evaluation") {
  CHECK(ModulusSpec::parse("zero").is_zero());
  CHECK(ModulusSpec::parse("lipschitz:2").upper(R(1, 2), 64) == Dyadic(1));
  CHECK(ModulusSpec::parse("holder:1/2:1").upper(R(1, 4), 64) == D(1, -1));
  Dyadic lg = ModulusSpec::parse("log").upper(R(1, 8), 64);
  // 1/ln(8) = 0.48089...
  CHECK(rat(lg) >= R(48089, 100000));
  CHECK(rat(lg) <= R(48091, 100000));
  CHECK_THROWS(ModulusSpec::parse("nonsense"));
  CHECK(parse_rational("3/4") == R(3, 4));
  CHECK(parse_rational("7") == R(7));
  CHECK_THROWS(parse_rational("x"));
  // scaled radius composes
  ModulusSpec scaled = ModulusSpec::lipschitz(1).scaled_radius(R(4));
  CHECK(scaled.upper(R(1, 4), 64) == Dyadic(1));
}

}  // TEST_SUITE

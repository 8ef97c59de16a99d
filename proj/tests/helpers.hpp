#pragma once

#include <doctest.h>

#include <random>

#include "flr/rational.hpp"

namespace flr::testing {

inline Dyadic D(long long m, std::int64_t e) { return Dyadic(BigInt(m), e); }
inline Rational R(long long p, long long q = 1) { return Rational(p, q); }

// 62 fractional bits in [0, 1); matches the verification sampler's shape.
inline Dyadic random_unit_dyadic(std::mt19937_64& rng) {
  return Dyadic(BigInt(rng() >> 2), -62);
}

inline std::vector<Dyadic> random_unit_point(int d, std::mt19937_64& rng) {
  std::vector<Dyadic> x;
  for (int j = 0; j < d; ++j) x.push_back(random_unit_dyadic(rng));
  return x;
}

}  // namespace flr::testing

#pragma once

#include "flr/network.hpp"

namespace flr {

// Parameters of one block-extraction stage: N blocks of J bits each.
struct ExtractorParams {
  int blocks = 2;        // N
  std::int64_t block_bits = 1;  // J
  Dyadic delta() const { return Dyadic::pow2(-block_bits); }
};

// Width-2 depth-2 relu network computing
//   g(x) = relu(relu(x) - relu((x + delta - 1)/delta)),  delta = 2^-J.
// g is the identity on [0, 1-delta] and zero outside (0, 1).
Network build_gate(std::int64_t J);

// Input (s, n) with s = 0.b_1...b_{NJ} in binary and n in {1..N}; output the
// value 0.b_{(n-1)J+1}...b_{nJ} of block n.  Width 2N, depth 4.
Network build_block_extractor(int N, std::int64_t J);

// Input (s, m) with s = 0.t_1...t_{N^L} and m in {1..N^L}; output t_m / 2.
// Width 2N+2 (2N when L == 1), depth 7L-3.
Network build_bit_locator(int N, int L);

// Single-input network with phi(m) = bits[m-1] for m in {1..N^L}.
// Width 2N+2 (2N when L == 1), depth 7L-2.  The whole table sits in one
// bias with N^L fractional bits.
Network build_point_fitter(int N, int L, const BitString& bits);

// Largest table the builders accept; keeps exponents and bias sizes sane.
inline constexpr std::int64_t kMaxTableSize = std::int64_t(1) << 22;

// N^L as int64, throwing when it exceeds kMaxTableSize.
std::int64_t checked_pow(int N, int L);

}  // namespace flr

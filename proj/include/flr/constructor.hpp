#pragma once

#include "flr/bits.hpp"
#include "flr/bounds.hpp"
#include "flr/target.hpp"

namespace flr {

// Uniform grid of K cells per axis on the unit cube.  Cell Q_beta is the
// product of the intervals E_k = [k/K, (k+1)/K), with E_{K-1} closed at 1;
// its minimum-norm vertex is the corner beta/K.
struct GridSpec {
  long K = 1;
  int d = 1;

  long cell_count() const;  // K^d, capped like checked_pow
  std::vector<Rational> corner(const std::vector<long>& beta) const;
  // Index of the cell containing x (componentwise E_k membership).
  std::vector<long> cell_of(const std::vector<Rational>& x) const;
  // Flat index i = 1 + sum_j beta_j K^{j-1}, a bijection onto {1..K^d}.
  long flat_index(const std::vector<long>& beta) const;
  std::vector<long> beta_of_flat(long i) const;
};

// Quantized samples of the normalized target at the cell corners: entry i
// holds the NL-bit string xi_i with |value(xi_i) - g(corner)| <= 2^-NL,
// where g = (f - f0q + Omega)/(2 Omega) is the normalization actually used
// by the compiler (see compile).  approx keeps the pre-quantization values.
struct SampleTable {
  int N = 0, L = 0, d = 0;
  int bits_per_entry = 0;  // N*L
  std::vector<BitString> bits;  // entry i at bits[i-1]
  std::vector<Dyadic> approx;

  long size() const { return static_cast<long>(bits.size()); }
  Dyadic value(long i) const { return bits.at(i - 1).value(); }
};

struct BuildOptions {
  int guard_bits = 64;
};

// Machine-checkable record binding a built network to its claimed sizes and
// error bound.  `theorem` selects the compile path: 1 = root-exponent rate
// via reparameterization, 2 = direct rate.
struct Certificate {
  TargetDesc target;
  int theorem = 2;
  int d = 1;
  long N = 2, L = 1;        // requested size parameters
  long N_eff = 2, L_eff = 1;  // sizes actually built (reparameterized on path 1)
  long K = 1;               // N_eff^L_eff grid resolution
  Dyadic omega;             // Omega: dyadic upper bound of omega_f(sqrt(d))
  Dyadic eps_guard;         // slack from quantizing the anchor value f(0)
  int guard_bits = 64;
  Dyadic bound;             // certified error bound, includes eps_guard
  AuditReport audit;
  long width_budget = 0, depth_budget = 0;
  std::int64_t created_unix = 0;
};

struct BuildResult {
  Network net;
  Certificate cert;
};

// Step function x -> k on E_k (k = 0..K-1, including K-1 at x = 1),
// realized as floor(-relu(-Kx + K - 1) + K - 1).  Width 1, depth 2.
Network build_cell_quantizer(long K);

// d parallel cell quantizers: x -> beta with x in Q_beta.  Width d, depth 2.
Network build_grid_projector(int d, long K);

// The flat-index bijection as a single affine row (no activation).
AffineMap build_flat_indexer(int d, long K);

// Samples g = (f - f0q + Omega)/(2 Omega) at every cell corner and rounds to
// the nearest N*L-bit value, clamped to [0, 1 - 2^-NL].  f lives on the unit
// cube; Omega must be positive.
SampleTable sample_and_quantize(const TargetFunction& f, const GridSpec& grid,
                                int N, int L, const Dyadic& Omega, const Dyadic& f0q);

// Network with psi2(i) = value(xi_i) for i in {1..N^(dL)}: L sequential
// blocks of N parallel point fitters plus two carry channels (flat index,
// running sum).  Width <= 2N^2+5N, depth L(7dL-2).
Network build_table_evaluator(int N, int L, int d, const SampleTable& table);

// Smallest N_eff >= 2 with (N_eff-1)^2 <= N < N_eff^2 and smallest
// L_eff >= 3 with (L_eff-1)^2 <= 4L < L_eff^2; the inequalities
// 2*N_eff^2+5*N_eff <= 5N+13 and 7*L_eff^2 <= 64L are asserted.
struct Repar {
  long N_eff = 2, L_eff = 3;
};
Repar reparameterize(long N, long L);

// Builds the full approximant for the named target and checks the audited
// sizes against the path's width/depth budgets.  Path 2 (direct): width
// max{d, 2N^2+5N}, depth 7dL^2+3, bound omega(sqrt(d) N^-L) + 2*Omega*2^-NL
// + eps_guard.  Path 1 (root-exponent): builds at the reparameterized sizes;
// width max{d, 5N+13}, depth 64dL+3, bound omega(sqrt(d) u) + 2*Omega*u +
// eps_guard with u a certified dyadic upper bound of N^-sqrt(L).  A zero
// modulus yields a constant network whose bound is eps_guard alone.
BuildResult compile(const TargetDesc& desc, int theorem, long N, long L,
                    const BuildOptions& opts = {});

}  // namespace flr

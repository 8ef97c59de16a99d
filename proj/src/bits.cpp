#include "flr/bits.hpp"

#include "flr/rational.hpp"

namespace flr {

namespace mp = boost::multiprecision;

std::int64_t checked_pow(int N, int L) {
  if (N < 1 || L < 0) throw std::invalid_argument("checked_pow: bad arguments");
  BigInt p = mp::pow(BigInt(N), static_cast<unsigned>(L));
  if (p > kMaxTableSize)
    throw std::invalid_argument("table size " + p.str() + " exceeds the supported scale (" +
                                std::to_string(kMaxTableSize) + ")");
  return p.convert_to<std::int64_t>();
}

Network build_gate(std::int64_t J) {
  if (J < 1) throw std::invalid_argument("build_gate: J must be >= 1");
  // Layer 1: a = relu(x), b = relu((x + delta - 1)/delta) = relu(2^J x + 1 - 2^J).
  Layer l1;
  l1.aff = AffineMap::zeros(2, 1);
  l1.aff.w[0][0] = Dyadic(1);
  l1.aff.w[1][0] = Dyadic::pow2(J);
  l1.aff.b[1] = Dyadic(1) - Dyadic::pow2(J);
  l1.act = {Act::relu, Act::relu};
  l1.nonneg = {0, 0};
  // Layer 2: relu(a - b).
  Layer l2;
  l2.aff = AffineMap::zeros(1, 2);
  l2.aff.w[0][0] = Dyadic(1);
  l2.aff.w[0][1] = Dyadic(-1);
  l2.act = {Act::relu};
  l2.nonneg = {0};
  return Network(1, {std::move(l1), std::move(l2)}, AffineMap::identity(1));
}

Network build_block_extractor(int N, std::int64_t J) {
  if (N < 1) throw std::invalid_argument("build_block_extractor: N must be >= 1");
  if (J < 1) throw std::invalid_argument("build_block_extractor: J must be >= 1");
  if (BigInt(N) * J > kMaxTableSize)
    throw std::invalid_argument("build_block_extractor: N*J exceeds the supported scale");

  // Layer 1 (width N+1): t_k = floor(2^{kJ} s) for k = 1..N, plus carried n.
  Layer l1;
  l1.aff = AffineMap::zeros(N + 1, 2);
  l1.act.assign(N + 1, Act::floor);
  l1.nonneg.assign(N + 1, 0);
  for (int k = 1; k <= N; ++k) l1.aff.w[k - 1][0] = Dyadic::pow2(k * J);
  l1.aff.w[N][1] = Dyadic(1);
  l1.act[N] = Act::relu;
  l1.nonneg[N] = 1;

  // Layer 2 (width N+1): block values s_k = t_k/2^J - t_{k-1} (t_0 drops out
  // since s < 1), plus carried n.  floor(2^J y) >= 2^J floor(y) keeps every
  // s_k nonnegative for any real input s.
  Layer l2;
  l2.aff = AffineMap::zeros(N + 1, N + 1);
  l2.act.assign(N + 1, Act::relu);
  l2.nonneg.assign(N + 1, 1);
  l2.aff.w[0][0] = Dyadic::pow2(-J);
  for (int k = 2; k <= N; ++k) {
    l2.aff.w[k - 1][k - 1] = Dyadic::pow2(-J);
    l2.aff.w[k - 1][k - 2] = Dyadic(-1);
  }
  l2.aff.w[N][N] = Dyadic(1);

  // Layer 3 (width 2N): both relu branches of the gate at y_k = s_k + k - n.
  Layer l3;
  l3.aff = AffineMap::zeros(2 * N, N + 1);
  l3.act.assign(2 * N, Act::relu);
  l3.nonneg.assign(2 * N, 0);
  Dyadic p2J = Dyadic::pow2(J);
  for (int k = 1; k <= N; ++k) {
    // a_k = relu(s_k + k - n)
    l3.aff.w[k - 1][k - 1] = Dyadic(1);
    l3.aff.w[k - 1][N] = Dyadic(-1);
    l3.aff.b[k - 1] = Dyadic(k);
    // b_k = relu(2^J (s_k + k - n) + 1 - 2^J)
    l3.aff.w[N + k - 1][k - 1] = p2J;
    l3.aff.w[N + k - 1][N] = -p2J;
    l3.aff.b[N + k - 1] = Dyadic(k) * p2J + Dyadic(1) - p2J;
  }

  // Layer 4 (width N): c_k = relu(a_k - b_k) = g(s_k + k - n); only the
  // block with k == n survives the gate.
  Layer l4;
  l4.aff = AffineMap::zeros(N, 2 * N);
  l4.act.assign(N, Act::relu);
  l4.nonneg.assign(N, 0);
  for (int k = 0; k < N; ++k) {
    l4.aff.w[k][k] = Dyadic(1);
    l4.aff.w[k][N + k] = Dyadic(-1);
  }

  AffineMap out = AffineMap::zeros(1, N);
  for (int k = 0; k < N; ++k) out.w[0][k] = Dyadic(1);
  return Network(2, {std::move(l1), std::move(l2), std::move(l3), std::move(l4)},
                 std::move(out));
}

namespace {

// Dyadic w with 0 <= w - 1/B < 1/(2 B^2 N) so that floor(w*(m-1)) equals
// (m-1) div B for all m in {1..B*N}: the excess stays below the gap between
// (m-1)/B and the next multiple of 1/B.
Dyadic div_weight(int N, int k) {
  BigInt B = mp::pow(BigInt(N), static_cast<unsigned>(k));
  if ((B & (B - 1)) == 0)
    return Dyadic::pow2(-static_cast<std::int64_t>(mp::msb(B)));
  std::int64_t pbits = static_cast<std::int64_t>(mp::msb(B * B * N)) + 2;
  return round_up_dyadic(Rational(1, B), pbits);
}

// One induction stage at block size J = N^k: maps (s, m) with m in
// {1..N^{k+1}} to (z, j) where z is block n = 1 + (m-1) div N^k of s and
// j = m - (n-1) N^k.  Depth 7, width 2N+2.
Network build_locator_stage(int N, int k) {
  std::int64_t J = checked_pow(N, k);
  Dyadic w = div_weight(N, k);
  Dyadic B(J);

  // A1 (width 3): u = floor(w*(m-1)), carry s, carry m.
  Layer a1;
  a1.aff = AffineMap::zeros(3, 2);
  a1.aff.w[0][1] = w;
  a1.aff.b[0] = -w;
  a1.aff.w[1][0] = Dyadic(1);
  a1.aff.w[2][1] = Dyadic(1);
  a1.act = {Act::floor, Act::relu, Act::relu};
  a1.nonneg = {0, 1, 1};

  // A2 (width 4): carry s, n = u + 1, carry m, carry u.
  Layer a2;
  a2.aff = AffineMap::zeros(4, 3);
  a2.aff.w[0][1] = Dyadic(1);
  a2.aff.w[1][0] = Dyadic(1);
  a2.aff.b[1] = Dyadic(1);
  a2.aff.w[2][2] = Dyadic(1);
  a2.aff.w[3][0] = Dyadic(1);
  a2.act.assign(4, Act::relu);
  a2.nonneg.assign(4, 1);

  Network stage_a(2, {std::move(a1), std::move(a2)}, AffineMap::identity(4));

  // B (width 2N+2, depth 4): extractor on (s, n) with (m, u) carried.
  Network stage_b = with_passthrough(build_block_extractor(N, J), 2);

  // C (width 2, depth 1): carry z, compute j = m - u * N^k.
  Layer c1;
  c1.aff = AffineMap::zeros(2, 3);
  c1.aff.w[0][0] = Dyadic(1);
  c1.aff.w[1][1] = Dyadic(1);
  c1.aff.w[1][2] = -B;
  c1.act = {Act::relu, Act::relu};
  c1.nonneg = {1, 1};
  Network stage_c(3, {std::move(c1)}, AffineMap::identity(2));

  return compose_serial(compose_serial(stage_a, stage_b), stage_c);
}

}  // namespace

Network build_bit_locator(int N, int L) {
  if (N < 1 || L < 1) throw std::invalid_argument("build_bit_locator: N, L must be >= 1");
  checked_pow(N, L);
  Network net = build_block_extractor(N, 1);
  for (int k = 1; k < L; ++k) net = compose_serial(build_locator_stage(N, k), net);
  return net;
}

Network build_point_fitter(int N, int L, const BitString& bits) {
  std::int64_t table = checked_pow(N, L);
  if (static_cast<std::int64_t>(bits.size()) != table)
    throw std::invalid_argument("build_point_fitter: expected " + std::to_string(table) +
                                " bits, got " + std::to_string(bits.size()));
  // Wrapper: materialize the table constant and pass the index through relu.
  Layer wrap;
  wrap.aff = AffineMap::zeros(2, 1);
  wrap.aff.b[0] = bits.value();
  wrap.aff.w[1][0] = Dyadic(1);
  wrap.act = {Act::relu, Act::relu};
  wrap.nonneg = {1, 0};
  Network wrapper(1, {std::move(wrap)}, AffineMap::identity(2));

  Network net = compose_serial(wrapper, build_bit_locator(N, L));
  // The locator yields bit/2; scale the output by 2.
  AffineMap twice = AffineMap::zeros(1, 1);
  twice.w[0][0] = Dyadic(2);
  return affine_wrap(net, AffineMap::identity(1), twice);
}

}  // namespace flr

#include "flr/constructor.hpp"

#include <ctime>
#include <stdexcept>

namespace flr {

namespace mp = boost::multiprecision;

long GridSpec::cell_count() const {
  if (K < 1 || d < 1) throw std::invalid_argument("GridSpec: K and d must be >= 1");
  BigInt p = mp::pow(BigInt(K), static_cast<unsigned>(d));
  if (p > kMaxTableSize)
    throw std::invalid_argument("grid has " + p.str() + " cells, beyond the supported scale");
  return p.convert_to<long>();
}

std::vector<Rational> GridSpec::corner(const std::vector<long>& beta) const {
  if (static_cast<int>(beta.size()) != d)
    throw std::invalid_argument("GridSpec::corner: index dimension mismatch");
  std::vector<Rational> x;
  x.reserve(beta.size());
  for (long b : beta) {
    if (b < 0 || b >= K) throw std::invalid_argument("GridSpec::corner: index out of range");
    x.emplace_back(b, K);
  }
  return x;
}

std::vector<long> GridSpec::cell_of(const std::vector<Rational>& x) const {
  if (static_cast<int>(x.size()) != d)
    throw std::invalid_argument("GridSpec::cell_of: point dimension mismatch");
  std::vector<long> beta;
  beta.reserve(x.size());
  for (const Rational& v : x) {
    if (v < 0 || v > 1) throw std::invalid_argument("GridSpec::cell_of: point outside the unit cube");
    BigInt k = floor_div(num(v) * K, den(v));
    if (k == K) --k;  // the top interval is closed at 1
    beta.push_back(k.convert_to<long>());
  }
  return beta;
}

long GridSpec::flat_index(const std::vector<long>& beta) const {
  if (static_cast<int>(beta.size()) != d)
    throw std::invalid_argument("GridSpec::flat_index: index dimension mismatch");
  BigInt i = 1, p = 1;
  for (long b : beta) {
    if (b < 0 || b >= K) throw std::invalid_argument("GridSpec::flat_index: index out of range");
    i += b * p;
    p *= K;
  }
  return i.convert_to<long>();
}

std::vector<long> GridSpec::beta_of_flat(long i) const {
  if (i < 1 || i > cell_count())
    throw std::invalid_argument("GridSpec::beta_of_flat: flat index out of range");
  std::vector<long> beta(d);
  long r = i - 1;
  for (int j = 0; j < d; ++j) {
    beta[j] = r % K;
    r /= K;
  }
  return beta;
}

Network build_cell_quantizer(long K) {
  if (K < 1) throw std::invalid_argument("build_cell_quantizer: K must be >= 1");
  Layer l1;
  l1.aff = AffineMap::zeros(1, 1);
  l1.aff.w[0][0] = Dyadic(-K);
  l1.aff.b[0] = Dyadic(K - 1);
  l1.act = {Act::relu};
  l1.nonneg = {0};
  Layer l2;
  l2.aff = AffineMap::zeros(1, 1);
  l2.aff.w[0][0] = Dyadic(-1);
  l2.aff.b[0] = Dyadic(K - 1);
  l2.act = {Act::floor};
  l2.nonneg = {0};
  return Network(1, {std::move(l1), std::move(l2)}, AffineMap::identity(1));
}

Network build_grid_projector(int d, long K) {
  if (d < 1) throw std::invalid_argument("build_grid_projector: d must be >= 1");
  return stack_parallel(std::vector<Network>(d, build_cell_quantizer(K)));
}

AffineMap build_flat_indexer(int d, long K) {
  GridSpec grid{K, d};
  grid.cell_count();  // scale check
  AffineMap m = AffineMap::zeros(1, d);
  m.b[0] = Dyadic(1);
  BigInt p = 1;
  for (int j = 0; j < d; ++j) {
    m.w[0][j] = Dyadic(p, 0);
    p *= K;
  }
  return m;
}

namespace {

// floor(log2(x)) for x > 0.
std::int64_t floor_log2(const Dyadic& x) {
  if (x.sign() <= 0) throw std::invalid_argument("floor_log2: needs a positive value");
  return static_cast<std::int64_t>(mp::msb(x.mantissa())) + x.exponent();
}

BigInt round_nearest_int(const Rational& x) {
  Rational r = x + Rational(1, 2);
  return floor_div(num(r), den(r));
}

}  // namespace

SampleTable sample_and_quantize(const TargetFunction& f, const GridSpec& grid,
                                int N, int L, const Dyadic& Omega, const Dyadic& f0q) {
  if (f.dim() != grid.d)
    throw std::invalid_argument("sample_and_quantize: target/grid dimension mismatch");
  if (Omega.sign() <= 0)
    throw std::invalid_argument("sample_and_quantize: Omega must be positive");
  int nl = N * L;
  if (nl < 1 || nl > 62) throw std::invalid_argument("sample_and_quantize: N*L out of range");
  long count = grid.cell_count();

  Rational om = to_rational(Omega), anchor = to_rational(f0q);
  Rational two_om = 2 * om;
  // Query f tightly enough that the normalized enclosure has half-width
  // <= 2^-(NL+3): bits such that 2^(1-bits) <= 2*Omega * 2^-(NL+2).
  std::int64_t fbits = nl + 3 - floor_log2(Dyadic(2) * Omega);
  if (fbits < 8) fbits = 8;

  BigInt lattice = BigInt(1) << nl;
  SampleTable table;
  table.N = N;
  table.L = L;
  table.d = grid.d;
  table.bits_per_entry = nl;
  table.bits.reserve(count);
  table.approx.reserve(count);
  for (long i = 1; i <= count; ++i) {
    std::vector<Rational> x = grid.corner(grid.beta_of_flat(i));
    Interval v = f.eval(x, fbits);
    Rational glo = (v.lo - anchor + om) / two_om;
    Rational ghi = (v.hi - anchor + om) / two_om;
    Rational mid = (glo + ghi) / 2;
    BigInt k = round_nearest_int(mid * lattice);
    if (k < 0) k = 0;
    if (k >= lattice) k = lattice - 1;
    table.bits.push_back(BitString::from_value(Dyadic(k, -nl), nl));
    table.approx.push_back(dyadic_nearest(mid, nl + 8));
  }
  return table;
}

Network build_table_evaluator(int N, int L, int d, const SampleTable& table) {
  if (N < 2 || L < 1 || d < 1)
    throw std::invalid_argument("build_table_evaluator: need N >= 2, L >= 1, d >= 1");
  if (table.bits_per_entry != N * L)
    throw std::invalid_argument("build_table_evaluator: table has " +
                                std::to_string(table.bits_per_entry) +
                                " bits per entry, expected " + std::to_string(N * L));
  std::int64_t entries = checked_pow(N, d * L);
  if (table.size() != entries)
    throw std::invalid_argument("build_table_evaluator: table has " +
                                std::to_string(table.size()) + " entries, expected " +
                                std::to_string(entries));

  // One fitter per bit position j: theta stacks bit j of every entry.
  std::vector<BitString> thetas;
  thetas.reserve(N * L);
  for (int j = 0; j < N * L; ++j) {
    std::vector<std::uint8_t> bits(entries);
    for (long i = 0; i < entries; ++i) bits[i] = static_cast<std::uint8_t>(table.bits[i].at(j));
    thetas.emplace_back(std::move(bits));
  }

  // Block b handles bit positions (b-1)N+1 .. bN with the flat index and the
  // running sum carried alongside the N parallel fitters.
  Network chain = identity_network(2);
  for (int b = 0; b < L; ++b) {
    std::vector<Network> members;
    members.reserve(N + 1);
    for (int k = 0; k < N; ++k)
      members.push_back(build_point_fitter(N, d * L, thetas[b * N + k]));
    members.push_back(carry_network(2, 1));
    Network stack = stack_parallel(members);

    AffineMap pre = AffineMap::zeros(N + 2, 2);  // (i, s) -> (i,...,i, i, s)
    for (int k = 0; k <= N; ++k) pre.w[k][0] = Dyadic(1);
    pre.w[N + 1][1] = Dyadic(1);
    AffineMap post = AffineMap::zeros(2, N + 2);  // collect bits into the sum
    post.w[0][N] = Dyadic(1);
    post.w[1][N + 1] = Dyadic(1);
    for (int k = 0; k < N; ++k) post.w[1][k] = Dyadic::pow2(-(b * N + k + 1));
    chain = compose_serial(chain, affine_wrap(stack, pre, post));
  }

  AffineMap lift = AffineMap::zeros(2, 1);  // i -> (i, 0)
  lift.w[0][0] = Dyadic(1);
  AffineMap drop = AffineMap::zeros(1, 2);  // (i, s) -> s
  drop.w[0][1] = Dyadic(1);
  Network psi2 = affine_wrap(chain, lift, drop);

  AuditReport a = psi2.audit();
  if (a.width > 2L * N * N + 5L * N || a.depth > L * (7L * d * L - 1) + 2)
    throw std::logic_error("build_table_evaluator: audited size exceeds the budget");
  return psi2;
}

Repar reparameterize(long N, long L) {
  if (N < 1 || L < 1) throw std::invalid_argument("reparameterize: N, L must be >= 1");
  Repar r;
  r.N_eff = (iroot_floor(BigInt(N), 2) + 1).convert_to<long>();
  r.L_eff = (iroot_floor(BigInt(4) * L, 2) + 1).convert_to<long>();
  auto sq = [](long v) { return BigInt(v) * v; };
  bool ok = r.N_eff >= 2 && r.L_eff >= 3 &&
            sq(r.N_eff - 1) <= N && BigInt(N) < sq(r.N_eff) &&
            sq(r.L_eff - 1) <= BigInt(4) * L && BigInt(4) * L < sq(r.L_eff) &&
            2 * sq(r.N_eff) + 5 * r.N_eff <= 5 * BigInt(N) + 13 &&
            7 * sq(r.L_eff) <= 64 * BigInt(L);
  if (!ok) throw std::logic_error("reparameterize: inequality chain violated");
  return r;
}

namespace {

Dyadic ceil_up(const Rational& v, int bits) { return dyadic_ceil(v, bits); }

struct Anchor {
  Dyadic f0q;
  Dyadic eps_guard;
};

Anchor quantize_anchor(const TargetFunction& f, int guard_bits) {
  Interval v = f.value_at_zero(guard_bits + 8);
  Anchor a;
  a.f0q = dyadic_nearest(v.mid(), guard_bits);
  Rational q = to_rational(a.f0q);
  Rational err = q - v.lo;
  if (v.hi - q > err) err = v.hi - q;
  if (err < 0) err = 0;
  a.eps_guard = ceil_up(err, guard_bits + 8);
  return a;
}

}  // namespace

BuildResult compile(const TargetDesc& desc, int theorem, long N, long L,
                    const BuildOptions& opts) {
  if (theorem != 1 && theorem != 2)
    throw std::invalid_argument("compile: theorem must be 1 or 2");
  if (N < 1 || L < 1) throw std::invalid_argument("compile: N, L must be >= 1");
  if (opts.guard_bits < 8 || opts.guard_bits > 4096)
    throw std::invalid_argument("compile: guard_bits must lie in [8, 4096]");
  int d = desc.d;
  int g = opts.guard_bits;
  std::int64_t wb = g + 16;

  TargetFunction f = unit_cube_view(desc);
  const ModulusSpec& om = f.modulus();

  Certificate cert;
  cert.target = desc;
  cert.theorem = theorem;
  cert.d = d;
  cert.N = N;
  cert.L = L;
  cert.guard_bits = g;
  if (theorem == 2) {
    cert.N_eff = N;
    cert.L_eff = L;
    cert.width_budget = std::max<long>(d, 2 * N * N + 5 * N);
    cert.depth_budget = 7L * d * L * L + 3;
  } else {
    Repar r = reparameterize(N, L);
    cert.N_eff = r.N_eff;
    cert.L_eff = r.L_eff;
    cert.width_budget = std::max<long>(d, 5 * N + 13);
    cert.depth_budget = 64L * d * L + 3;
  }
  cert.created_unix = static_cast<std::int64_t>(std::time(nullptr));

  Anchor anchor = quantize_anchor(f, g);
  cert.eps_guard = anchor.eps_guard;

  Interval sd = sqrt_ival(Rational(d), wb);
  cert.omega = ceil_up(om.eval(sd, wb).hi, g);

  if (cert.omega.is_zero()) {
    // Constant modulus: the target never moves, so a constant net suffices.
    cert.K = 1;
    AffineMap out = AffineMap::zeros(1, d);
    out.b[0] = anchor.f0q;
    Network net = Network::affine_only(d, std::move(out));
    cert.audit = net.audit();
    cert.bound = cert.eps_guard;
    return {std::move(net), std::move(cert)};
  }

  if (theorem == 2 && N < 2)
    throw std::invalid_argument(
        "compile: the direct path needs N >= 2 (N = 1 collapses the grid; "
        "the root-exponent path handles N = 1 by reparameterizing)");

  int n = static_cast<int>(cert.N_eff);
  int l = static_cast<int>(cert.L_eff);
  long K = checked_pow(n, l);
  checked_pow(n, d * l);  // table scale check before any sampling work
  cert.K = K;

  GridSpec grid{K, d};
  SampleTable table = sample_and_quantize(f, grid, n, l, cert.omega, anchor.f0q);
  Network psi2 = build_table_evaluator(n, l, d, table);
  Network core = compose_serial(build_grid_projector(d, K),
                                affine_wrap(psi2, build_flat_indexer(d, K),
                                            AffineMap::identity(1)));

  AffineMap pre = AffineMap::identity(d);
  if (desc.halfwidth) {
    // y -> (y + M)/(2M); unit_cube_view already checked M = 2^k.
    Dyadic inv2M = Dyadic::pow2(-1 - desc.halfwidth->exponent());
    pre = AffineMap::zeros(d, d);
    for (int j = 0; j < d; ++j) {
      pre.w[j][j] = inv2M;
      pre.b[j] = Dyadic(1, -1);
    }
  }
  AffineMap post = AffineMap::zeros(1, 1);
  post.w[0][0] = Dyadic(2) * cert.omega;
  post.b[0] = anchor.f0q - cert.omega;
  Network net = affine_wrap(core, pre, post);

  cert.audit = net.audit();
  if (cert.audit.width > cert.width_budget || cert.audit.depth > cert.depth_budget)
    throw std::logic_error("compile: audited size exceeds the declared budget");

  Dyadic term1, term2;
  if (theorem == 2) {
    Rational radius = Rational(1, BigInt(K));
    term1 = ceil_up(om.eval(ival_mul(sd, ival_point(radius)), wb).hi, g);
    term2 = Dyadic(2) * cert.omega * Dyadic::pow2(-static_cast<std::int64_t>(N) * L);
  } else {
    Dyadic u = ceil_up(root_exp_decay(N, L, wb).hi, g);
    Rational ur = to_rational(u);
    // u >= N^-sqrt(L) >= N_eff^-L_eff >= 2^-(N_eff*L_eff), so the bound at u
    // dominates what the reparameterized build achieves.
    if (ur * Rational(BigInt(mp::pow(BigInt(n), static_cast<unsigned>(l)))) < 1)
      throw std::logic_error("compile: decay bound below the built grid resolution");
    term1 = ceil_up(om.eval(ival_mul(sd, ival_point(ur)), wb).hi, g);
    term2 = Dyadic(2) * cert.omega * u;
  }
  cert.bound = term1 + term2 + cert.eps_guard;
  return {std::move(net), std::move(cert)};
}

}  // namespace flr

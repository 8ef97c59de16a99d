#include "flr/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace flr {

namespace {

constexpr std::int64_t kAnchorBits = 64;
constexpr std::int64_t kQueryBits = 192;
constexpr std::int64_t kReportBits = 96;
constexpr std::int64_t kCoordBits = 62;

std::vector<Dyadic> to_box(const std::vector<Dyadic>& u, const DomainBox& box) {
  std::vector<Dyadic> x;
  x.reserve(u.size());
  for (const Dyadic& v : u) x.push_back(box.low + box.scale * v);
  return x;
}

void check_sample_scale(int d, double per_axis_count) {
  if (d >= 1 && std::pow(per_axis_count, d) > double(1 << 22))
    throw std::invalid_argument("sample set would exceed the supported scale");
}

}  // namespace

SampleSet grid_points(int d, long per_axis, const DomainBox& box) {
  if (d < 1 || per_axis < 1) throw std::invalid_argument("grid_points: bad arguments");
  check_sample_scale(d, double(per_axis));
  std::vector<Dyadic> axis;
  if (per_axis == 1) {
    axis.push_back(Dyadic(1, -1));
  } else {
    for (long j = 0; j < per_axis; ++j)
      axis.push_back(dyadic_nearest(Rational(j, per_axis - 1), kAnchorBits));
  }
  SampleSet s;
  std::vector<std::size_t> idx(d, 0);
  while (true) {
    std::vector<Dyadic> u;
    u.reserve(d);
    for (int j = 0; j < d; ++j) u.push_back(axis[idx[j]]);
    s.pts.push_back(to_box(u, box));
    int j = 0;
    for (; j < d; ++j) {
      if (++idx[j] < axis.size()) break;
      idx[j] = 0;
    }
    if (j == d) break;
  }
  return s;
}

SampleSet random_points(int d, std::uint64_t count, std::uint64_t seed, const DomainBox& box) {
  if (d < 1) throw std::invalid_argument("random_points: bad dimension");
  std::mt19937_64 rng(seed);
  SampleSet s;
  s.seed = seed;
  s.pts.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<Dyadic> u;
    u.reserve(d);
    for (int j = 0; j < d; ++j) u.push_back(Dyadic(BigInt(rng() >> 2), -kCoordBits));
    s.pts.push_back(to_box(u, box));
  }
  return s;
}

SampleSet cell_anchor_points(int d, long K, const DomainBox& box) {
  GridSpec grid{K, d};
  long cells = grid.cell_count();
  SampleSet s;
  s.pts.reserve(2 * cells + 1);
  for (long i = 1; i <= cells; ++i) {
    std::vector<long> beta = grid.beta_of_flat(i);
    std::vector<Dyadic> corner, center;
    corner.reserve(d);
    center.reserve(d);
    for (int j = 0; j < d; ++j) {
      // Snap into the half-open cell: round the corner up, the center either way.
      corner.push_back(dyadic_ceil(Rational(beta[j], K), kAnchorBits));
      center.push_back(dyadic_nearest(Rational(2 * beta[j] + 1, 2 * K), kAnchorBits));
    }
    s.pts.push_back(to_box(corner, box));
    s.pts.push_back(to_box(center, box));
  }
  s.pts.push_back(to_box(std::vector<Dyadic>(d, Dyadic(1)), box));
  return s;
}

SampleSet merge_samples(std::vector<SampleSet> parts) {
  SampleSet all;
  for (auto& p : parts) {
    for (auto& x : p.pts) all.pts.push_back(std::move(x));
    if (p.seed) all.seed = p.seed;
  }
  return all;
}

ErrorReport measure_sup_error(const Network& net, const TargetFunction& f,
                              const SampleSet& samples,
                              const std::optional<Dyadic>& bound, bool keep_records) {
  if (net.input_dim() != f.dim())
    throw std::invalid_argument("measure_sup_error: network/target dimension mismatch");
  ErrorReport rep;
  rep.sample_count = samples.pts.size();
  if (samples.seed) {
    rep.seeded = true;
    rep.seed = *samples.seed;
  }
  Rational max_err = -1;
  for (const auto& x : samples.pts) {
    Dyadic phi = net.eval(x)[0];
    std::vector<Rational> xr;
    xr.reserve(x.size());
    for (const Dyadic& c : x) xr.push_back(to_rational(c));
    Interval fv = f.eval(xr, kQueryBits);
    Rational p = to_rational(phi);
    Rational lo = p - fv.lo, hi = fv.hi - p;
    if (lo < 0) lo = -lo;
    if (hi < 0) hi = -hi;
    Rational err = lo < hi ? hi : lo;
    if (err > max_err) {
      max_err = err;
      rep.argmax = x;
    }
    if (keep_records) rep.records.push_back({x, phi, fv, err});
  }
  if (max_err < 0) max_err = 0;
  rep.max_abs_error = dyadic_ceil(max_err, kReportBits);
  if (bound) {
    rep.has_bound = true;
    rep.bound = *bound;
    rep.pass = rep.max_abs_error <= rep.bound;
  }
  return rep;
}

ErrorReport check_certificate(const Network& net, const Certificate& cert,
                              const CheckOptions& opts) {
  AuditReport audit = net.audit();
  if (audit.width != cert.audit.width || audit.depth != cert.audit.depth ||
      audit.nonzero_params != cert.audit.nonzero_params)
    throw std::invalid_argument("check_certificate: network does not match the certified audit");
  if (audit.width > cert.width_budget || audit.depth > cert.depth_budget)
    throw std::invalid_argument("check_certificate: certificate violates its own size budget");

  TargetFunction f = make_target(cert.target);
  DomainBox box = domain_box(cert.target);
  std::vector<SampleSet> parts;
  parts.push_back(cell_anchor_points(cert.d, cert.K, box));
  if (opts.extra_grid > 1) parts.push_back(grid_points(cert.d, opts.extra_grid, box));
  if (opts.random_count > 0)
    parts.push_back(random_points(cert.d, opts.random_count, opts.seed, box));
  ErrorReport rep = measure_sup_error(net, f, merge_samples(std::move(parts)), cert.bound,
                                      opts.keep_records);

  ModulusSpec unit_modulus = unit_cube_view(cert.target).modulus();
  Interval sd = sqrt_ival(Rational(cert.d), kAnchorBits);
  Interval radius = ival_scale(sd, Rational(1, BigInt(cert.K)));
  rep.has_modulus_term = true;
  rep.modulus_term = dyadic_ceil(unit_modulus.eval(radius, kAnchorBits).hi, kAnchorBits);
  return rep;
}

namespace {

std::string describe_failure(const BitString& s, long index, const Dyadic& got,
                             const Dyadic& want) {
  std::ostringstream os;
  os << "string " << s.str() << ", index " << index << ": got " << got.to_string()
     << ", want " << want.to_string();
  return os.str();
}

}  // namespace

BitCheckReport check_block_extractor(int N, std::int64_t J, std::uint64_t cap,
                                     std::uint64_t random_strings, std::uint64_t seed) {
  Network net = build_block_extractor(N, J);
  BitCheckReport rep;
  rep.level = "block";
  rep.N = N;
  rep.param = J;
  rep.audit = net.audit();
  std::size_t len = static_cast<std::size_t>(N) * J;
  rep.exhaustive = len < 63 && (std::uint64_t(1) << len) <= cap;
  std::mt19937_64 rng(seed);
  if (!rep.exhaustive) {
    rep.seeded = true;
    rep.seed = seed;
  }
  std::uint64_t total = rep.exhaustive ? (std::uint64_t(1) << len) : random_strings;
  for (std::uint64_t v = 0; v < total; ++v) {
    BitString s = rep.exhaustive
                      ? BitString::from_value(Dyadic(BigInt(v), -std::int64_t(len)), len)
                      : BitString::random(len, rng);
    for (int n = 1; n <= N; ++n) {
      Dyadic got = net.eval({s.value(), Dyadic(n)})[0];
      Dyadic want = oracle_extract(s, (n - 1) * J, J).value();
      ++rep.cases;
      if (got != want) {
        if (rep.failures == 0) rep.first_failure = describe_failure(s, n, got, want);
        ++rep.failures;
      }
    }
  }
  return rep;
}

BitCheckReport check_bit_locator(int N, int L, std::uint64_t cap,
                                 std::uint64_t random_strings, std::uint64_t seed) {
  Network net = build_bit_locator(N, L);
  BitCheckReport rep;
  rep.level = "locator";
  rep.N = N;
  rep.param = L;
  rep.audit = net.audit();
  std::size_t len = static_cast<std::size_t>(checked_pow(N, L));
  rep.exhaustive = len < 63 && (std::uint64_t(1) << len) <= cap;
  std::mt19937_64 rng(seed);
  if (!rep.exhaustive) {
    rep.seeded = true;
    rep.seed = seed;
  }
  std::uint64_t total = rep.exhaustive ? (std::uint64_t(1) << len) : random_strings;
  for (std::uint64_t v = 0; v < total; ++v) {
    BitString s = rep.exhaustive
                      ? BitString::from_value(Dyadic(BigInt(v), -std::int64_t(len)), len)
                      : BitString::random(len, rng);
    for (std::size_t m = 1; m <= len; ++m) {
      Dyadic got = net.eval({s.value(), Dyadic(static_cast<long long>(m))})[0];
      Dyadic want = oracle_extract(s, m - 1, 1).value();
      ++rep.cases;
      if (got != want) {
        if (rep.failures == 0) rep.first_failure = describe_failure(s, m, got, want);
        ++rep.failures;
      }
    }
  }
  return rep;
}

BitCheckReport check_point_fitter(int N, int L, std::uint64_t tables, std::uint64_t seed) {
  BitCheckReport rep;
  rep.level = "fitter";
  rep.N = N;
  rep.param = L;
  rep.seeded = true;
  rep.seed = seed;
  std::size_t len = static_cast<std::size_t>(checked_pow(N, L));
  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 0; t < tables; ++t) {
    BitString theta = BitString::random(len, rng);
    Network net = build_point_fitter(N, L, theta);
    rep.audit = net.audit();
    for (std::size_t m = 1; m <= len; ++m) {
      Dyadic got = net.eval({Dyadic(static_cast<long long>(m))})[0];
      Dyadic want(theta.at(m - 1));
      ++rep.cases;
      if (got != want) {
        if (rep.failures == 0) rep.first_failure = describe_failure(theta, m, got, want);
        ++rep.failures;
      }
    }
  }
  return rep;
}

MemorizationReport memorization_demo(int N, int L, std::uint64_t seed) {
  MemorizationReport rep;
  rep.N = N;
  rep.L = L;
  rep.seed = seed;
  rep.points = checked_pow(N, L);
  rep.constant_bits = rep.points;
  std::mt19937_64 rng(seed);
  BitString theta = BitString::random(rep.points, rng);
  Network net = build_point_fitter(N, L, theta);
  AuditReport audit = net.audit();
  rep.width = audit.width;
  rep.depth = audit.depth;
  rep.all_exact = true;
  for (long m = 1; m <= rep.points; ++m)
    if (net.eval({Dyadic(m)})[0] != Dyadic(theta.at(m - 1))) rep.all_exact = false;
  return rep;
}

DivergenceReport float_divergence_probe(const Network& net,
                                        const std::vector<std::vector<Dyadic>>& points) {
  DivergenceReport rep;
  rep.tolerance = Dyadic::pow2(-40);
  double tol = rep.tolerance.to_double();
  for (const auto& x : points) {
    ++rep.points;
    auto exact = net.eval_trace(x);
    std::vector<double> xf;
    xf.reserve(x.size());
    for (const Dyadic& c : x) xf.push_back(c.to_double());
    auto approx = net.eval_f64_trace(xf);
    int first = -1;
    for (std::size_t li = 0; li < exact.size() && first < 0; ++li)
      for (std::size_t i = 0; i < exact[li].size(); ++i) {
        double e = exact[li][i].to_double();
        double a = approx[li][i];
        if (!std::isfinite(a) || std::abs(a - e) > tol) {
          first = static_cast<int>(li);
          break;
        }
      }
    double out_e = exact.back()[0].to_double();
    double out_a = approx.back()[0];
    if (!std::isfinite(out_a) || std::abs(out_a - out_e) > tol) {
      ++rep.divergent;
      if (rep.records.size() < 32) rep.records.push_back({x, first, out_a, out_e});
    }
  }
  return rep;
}

}  // namespace flr

#include "flr/constructor.hpp"

#include "helpers.hpp"

using namespace flr;
using namespace flr::testing;

namespace {

TargetDesc mean_desc(int d) {
  TargetDesc t;
  t.name = "mean";
  t.d = d;
  return t;
}

// exact normalized value of the mean target: (mean(x) - f0q + Omega)/(2 Omega)
Rational mean_normalized(const std::vector<Rational>& x, const Rational& f0q,
                         const Rational& Omega) {
  Rational s = 0;
  for (const auto& c : x) s += c;
  Rational m = s / static_cast<long long>(x.size());
  return (m - f0q + Omega) / (2 * Omega);
}

}  // namespace

TEST_SUITE("constructor") {

TEST_CASE("cell quantizer") {
  Network q = build_cell_quantizer(4);
  CHECK(q.audit().width == 1);
  CHECK(q.audit().depth == 2);
  CHECK(q.eval({dyadic_nearest(R(3, 10), 20)})[0] == Dyadic(1));
  CHECK(q.eval({Dyadic(1)})[0] == Dyadic(3));
  CHECK(q.eval({Dyadic(0)})[0] == Dyadic(0));
  Network one = build_cell_quantizer(1);
  for (auto x : {Dyadic(0), D(1, -1), Dyadic(1)}) CHECK(one.eval({x})[0] == Dyadic(0));
}

TEST_CASE("cell quantizer agrees with interval membership") {
  for (long K : {1L, 2L, 3L, 5L, 8L}) {
    Network q = build_cell_quantizer(K);
    GridSpec grid{K, 1};
    std::mt19937_64 rng(100 + K);
    for (int i = 0; i < 300; ++i) {
      Dyadic x = random_unit_dyadic(rng);
      long want = grid.cell_of({to_rational(x)})[0];
      CHECK(q.eval({x})[0] == Dyadic(want));
    }
    CHECK(q.eval({Dyadic(1)})[0] == Dyadic(K - 1));
  }
}

TEST_CASE("grid projector") {
  Network p = build_grid_projector(2, 4);
  CHECK(p.audit().width == 2);
  CHECK(p.audit().depth == 2);
  auto v = p.eval({dyadic_nearest(R(3, 10), 20), dyadic_nearest(R(9, 10), 20)});
  CHECK(v == std::vector<Dyadic>{Dyadic(1), Dyadic(3)});
  // dyadic corners land in their own cell
  for (long b0 = 0; b0 < 4; ++b0)
    for (long b1 = 0; b1 < 4; ++b1) {
      auto w = p.eval({D(b0, -2), D(b1, -2)});
      CHECK(w == std::vector<Dyadic>{Dyadic(b0), Dyadic(b1)});
    }
}

TEST_CASE("projector matches the partition oracle") {
  for (int d : {1, 2}) {
    for (long K : {2L, 3L, 8L}) {
      Network p = build_grid_projector(d, K);
      GridSpec grid{K, d};
      std::mt19937_64 rng(200 + 10 * d + K);
      for (int i = 0; i < 500; ++i) {
        auto x = random_unit_point(d, rng);
        std::vector<Rational> xr;
        for (const auto& c : x) xr.push_back(to_rational(c));
        auto beta = grid.cell_of(xr);
        auto got = p.eval(x);
        for (int j = 0; j < d; ++j) CHECK(got[j] == Dyadic(beta[j]));
      }
    }
  }
}

TEST_CASE("flat indexer") {
  AffineMap psi1 = build_flat_indexer(2, 4);
  CHECK(psi1.apply({Dyadic(0), Dyadic(0)}) == std::vector<Dyadic>{Dyadic(1)});
  CHECK(psi1.apply({Dyadic(3), Dyadic(3)}) == std::vector<Dyadic>{Dyadic(16)});
  GridSpec grid{4, 2};
  std::vector<bool> seen(17, false);
  for (long b0 = 0; b0 < 4; ++b0)
    for (long b1 = 0; b1 < 4; ++b1) {
      long i = grid.flat_index({b0, b1});
      Dyadic viaNet = psi1.apply({Dyadic(b0), Dyadic(b1)})[0];
      CHECK(viaNet == Dyadic(i));
      CHECK(grid.beta_of_flat(i) == std::vector<long>{b0, b1});
      CHECK(1 <= i);
      CHECK(i <= 16);
      CHECK(!seen[static_cast<std::size_t>(i)]);
      seen[static_cast<std::size_t>(i)] = true;
    }
}

TEST_CASE("grid spec membership") {
  GridSpec grid{4, 1};
  CHECK(grid.cell_count() == 4);
  CHECK(grid.cell_of({R(0)}) == std::vector<long>{0});
  CHECK(grid.cell_of({R(1, 4)}) == std::vector<long>{1});
  CHECK(grid.cell_of({R(1)}) == std::vector<long>{3});
  CHECK_THROWS(grid.cell_of({R(5, 4)}));
  CHECK_THROWS(grid.cell_of({R(-1, 10)}));
  CHECK(grid.corner({2}) == std::vector<Rational>{R(1, 2)});
}

TEST_CASE("sampling the mean target, frozen 4-bit table") {
  auto f = make_target(mean_desc(1));
  GridSpec grid{4, 1};
  SampleTable table = sample_and_quantize(f, grid, 2, 2, Dyadic(1), Dyadic(0));
  REQUIRE(table.size() == 4);
  CHECK(table.bits_per_entry == 4);
  CHECK(table.bits[0].str() == "1000");
  CHECK(table.bits[1].str() == "1010");
  CHECK(table.bits[2].str() == "1100");
  CHECK(table.bits[3].str() == "1110");
  CHECK(table.value(1) == D(1, -1));
  for (long i = 1; i <= 4; ++i) {
    Rational want = mean_normalized(grid.corner(grid.beta_of_flat(i)), R(0), R(1));
    Rational got = to_rational(table.value(i));
    Rational err = got > want ? got - want : want - got;
    CHECK(err <= pow2_rational(-4));
    // stored approximations track the quantized values
    Rational ap = to_rational(table.approx[static_cast<std::size_t>(i - 1)]);
    Rational aerr = ap > want ? ap - want : want - ap;
    CHECK(aerr <= pow2_rational(-4));
  }
}

TEST_CASE("sampling in two dimensions") {
  auto f = make_target(mean_desc(2));
  GridSpec grid{2, 2};
  SampleTable table = sample_and_quantize(f, grid, 2, 1, Dyadic(1), Dyadic(0));
  REQUIRE(table.size() == 4);
  CHECK(table.bits[0].str() == "10");
  CHECK(table.bits[1].str() == "11");
  CHECK(table.bits[2].str() == "11");
  CHECK(table.bits[3].str() == "11");
  for (long i = 1; i <= 4; ++i) {
    Rational want = mean_normalized(grid.corner(grid.beta_of_flat(i)), R(0), R(1));
    Rational got = to_rational(table.value(i));
    Rational err = got > want ? got - want : want - got;
    CHECK(err <= pow2_rational(-2));
  }
}

TEST_CASE("overstated Omega keeps the table sound") {
  auto f = make_target(mean_desc(1));
  GridSpec grid{4, 1};
  SampleTable table = sample_and_quantize(f, grid, 2, 2, Dyadic(2), Dyadic(0));
  for (long i = 1; i <= 4; ++i) {
    Rational got = to_rational(table.value(i));
    CHECK(got >= R(0));
    CHECK(got <= R(1));
    Rational want = mean_normalized(grid.corner(grid.beta_of_flat(i)), R(0), R(2));
    Rational err = got > want ? got - want : want - got;
    CHECK(err <= pow2_rational(-4));
  }
}

TEST_CASE("constant target collapses the table") {
  TargetDesc c;
  c.name = "const";
  c.d = 1;
  auto f = make_target(c);
  GridSpec grid{4, 1};
  SampleTable table = sample_and_quantize(f, grid, 2, 2, Dyadic(1), D(1, -1));
  for (long i = 2; i <= 4; ++i) CHECK(table.bits[static_cast<std::size_t>(i - 1)] == table.bits[0]);
  // (1/2 - 1/2 + 1)/2 = 1/2
  CHECK(table.value(1) == D(1, -1));
}

TEST_CASE("table evaluator reproduces its table") {
  auto f = make_target(mean_desc(1));
  GridSpec grid{4, 1};
  SampleTable table = sample_and_quantize(f, grid, 2, 2, Dyadic(1), Dyadic(0));
  Network psi2 = build_table_evaluator(2, 2, 1, table);
  auto a = psi2.audit();
  CHECK(a.width <= 2 * 4 + 5 * 2);
  CHECK(a.depth <= 2 * (7 * 1 * 2 - 1) + 2);
  for (long i = 1; i <= 4; ++i) CHECK(psi2.eval({Dyadic(i)})[0] == table.value(i));
}

TEST_CASE("table evaluator on an all-zero table") {
  SampleTable table;
  table.N = 2;
  table.L = 1;
  table.d = 1;
  table.bits_per_entry = 2;
  table.bits = {BitString::parse("00"), BitString::parse("00")};
  table.approx = {Dyadic(0), Dyadic(0)};
  Network psi2 = build_table_evaluator(2, 1, 1, table);
  CHECK(psi2.eval({Dyadic(1)})[0] == Dyadic(0));
  CHECK(psi2.eval({Dyadic(2)})[0] == Dyadic(0));
}

TEST_CASE("projector, indexer, and evaluator compose") {
  auto f = make_target(mean_desc(2));
  GridSpec grid{2, 2};
  SampleTable table = sample_and_quantize(f, grid, 2, 1, Dyadic(1), Dyadic(0));
  Network psi2 = build_table_evaluator(2, 1, 2, table);
  Network core = compose_serial(build_grid_projector(2, 2),
                                affine_wrap(psi2, build_flat_indexer(2, 2),
                                            AffineMap::identity(1)));
  for (long b0 = 0; b0 < 2; ++b0)
    for (long b1 = 0; b1 < 2; ++b1) {
      Dyadic got = core.eval({D(b0, -1), D(b1, -1)})[0];
      CHECK(got == table.value(grid.flat_index({b0, b1})));
    }
}

TEST_CASE("reparameterize frozen points and proof chain") {
  CHECK(reparameterize(1, 1).N_eff == 2);
  CHECK(reparameterize(1, 1).L_eff == 3);
  CHECK(reparameterize(4, 1).N_eff == 3);
  CHECK(reparameterize(9, 1).N_eff == 4);
  for (long N = 1; N <= 16; ++N)
    for (long L = 1; L <= 16; ++L) {
      Repar r = reparameterize(N, L);
      long n = r.N_eff, l = r.L_eff;
      CHECK((n - 1) * (n - 1) <= N);
      CHECK(N < n * n);
      CHECK((l - 1) * (l - 1) <= 4 * L);
      CHECK(4 * L < l * l);
      CHECK(2 * n * n + 5 * n <= 5 * N + 13);
      CHECK(7 * l * l <= 64 * L);
    }
}

TEST_CASE("direct-path build, frozen certificate") {
  BuildResult res = compile(mean_desc(1), 2, 2, 2);
  const Certificate& c = res.cert;
  CHECK(c.theorem == 2);
  CHECK(c.N_eff == 2);
  CHECK(c.L_eff == 2);
  CHECK(c.K == 4);
  CHECK(c.omega == Dyadic(1));
  CHECK(c.eps_guard == Dyadic(0));
  CHECK(c.bound == D(3, -3));
  CHECK(c.width_budget == 18);
  CHECK(c.depth_budget == 31);
  CHECK(c.audit.width <= 18);
  CHECK(c.audit.depth <= 31);
  CHECK(c.created_unix > 0);
  auto a = res.net.audit();
  CHECK(a.width == c.audit.width);
  CHECK(a.depth == c.audit.depth);
  CHECK(a.nonzero_params == c.audit.nonzero_params);

  // corner identity up to quantization, then the full bound at the top vertex
  for (long b = 0; b < 4; ++b) {
    Dyadic x = D(b, -2);
    Rational err = to_rational(res.net.eval({x})[0]) - to_rational(x);
    if (err < 0) err = -err;
    CHECK(err <= R(1, 8));  // 2*Omega*2^-NL
  }
  Rational top = to_rational(res.net.eval({Dyadic(1)})[0]) - R(1);
  if (top < 0) top = -top;
  CHECK(top <= to_rational(c.bound));
}

TEST_CASE("constant targets produce constant networks") {
  TargetDesc c;
  c.name = "const";
  c.d = 2;
  BuildResult res = compile(c, 1, 3, 3);
  CHECK(res.cert.K == 1);
  CHECK(res.cert.bound == Dyadic(0));
  CHECK(res.net.depth() == 0);
  std::mt19937_64 rng(55);
  for (int i = 0; i < 20; ++i)
    CHECK(res.net.eval(random_unit_point(2, rng))[0] == D(1, -1));

  TargetDesc third;
  third.name = "const";
  third.d = 1;
  third.value = R(1, 3);
  BuildResult r3 = compile(third, 2, 2, 2);
  CHECK(r3.cert.bound == r3.cert.eps_guard);
  CHECK(r3.cert.eps_guard > Dyadic(0));
  CHECK(to_rational(r3.cert.eps_guard) <= pow2_rational(-60));
  Rational err = to_rational(r3.net.eval({D(1, -1)})[0]) - R(1, 3);
  if (err < 0) err = -err;
  CHECK(err <= to_rational(r3.cert.eps_guard));
}

TEST_CASE("N=1 is rejected on the direct path only") {
  CHECK_THROWS_AS(compile(mean_desc(1), 2, 1, 2), std::invalid_argument);
  BuildResult res = compile(mean_desc(1), 1, 1, 1);
  CHECK(res.cert.N_eff == 2);
  CHECK(res.cert.L_eff == 3);
}

TEST_CASE("root-exponent build in two dimensions") {
  BuildResult res = compile(mean_desc(2), 1, 2, 2);
  const Certificate& c = res.cert;
  CHECK(c.theorem == 1);
  CHECK(c.N_eff == 2);
  CHECK(c.L_eff == 3);
  CHECK(c.K == 8);
  CHECK(c.width_budget == 23);
  CHECK(c.depth_budget == 259);
  CHECK(c.audit.width <= 23);
  CHECK(c.audit.depth <= 259);
  // bound = 3 * 2^-sqrt(2) up to certification slack: 1.12564...
  CHECK(to_rational(c.bound) >= R(112564, 100000));
  CHECK(to_rational(c.bound) <= R(112565, 100000));
}

TEST_CASE("domain wrapping") {
  TargetDesc half = mean_desc(1);
  half.halfwidth = D(1, -1);
  BuildResult rh = compile(half, 2, 2, 2);
  CHECK(rh.cert.bound == D(3, -3));  // 2M = 1: same bound as the unit build
  for (long b = 0; b < 4; ++b) {
    Dyadic y = D(b, -2) - D(1, -1);
    Rational err = to_rational(rh.net.eval({y})[0]) - to_rational(y);
    if (err < 0) err = -err;
    CHECK(err <= R(1, 8));
  }

  TargetDesc wide = mean_desc(1);
  wide.halfwidth = Dyadic(2);
  BuildResult rw = compile(wide, 2, 2, 2);
  CHECK(rw.cert.omega == Dyadic(4));
  CHECK(rw.cert.bound == D(3, -1));  // 1 + 1/2
  for (long b = 0; b < 4; ++b) {
    Dyadic y = Dyadic(b) - Dyadic(2);  // cell corners of [-2,2]
    Rational err = to_rational(rw.net.eval({y})[0]) - to_rational(y);
    if (err < 0) err = -err;
    CHECK(err <= R(1, 2));  // 2*Omega*2^-NL = 8/16
  }

  TargetDesc odd = mean_desc(1);
  odd.halfwidth = Dyadic(3);
  CHECK_THROWS_AS(compile(odd, 2, 2, 2), std::invalid_argument);
  TargetDesc frac = mean_desc(1);
  frac.halfwidth = D(3, -1);
  CHECK_THROWS_AS(compile(frac, 2, 2, 2), std::invalid_argument);
}

TEST_CASE("compile validates its arguments") {
  CHECK_THROWS_AS(compile(mean_desc(1), 3, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(compile(mean_desc(1), 2, 0, 2), std::invalid_argument);
  BuildOptions bad;
  bad.guard_bits = 4;
  CHECK_THROWS_AS(compile(mean_desc(1), 2, 2, 2, bad), std::invalid_argument);
  TargetDesc unknown;
  unknown.name = "nope";
  unknown.d = 1;
  CHECK_THROWS(compile(unknown, 2, 2, 2));
}

}  // TEST_SUITE

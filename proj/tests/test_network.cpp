#include "flr/network.hpp"

#include "flr/bits.hpp"
#include "helpers.hpp"

using namespace flr;
using namespace flr::testing;

namespace {

Network single_neuron(Act act, const Dyadic& w, const Dyadic& b) {
  Layer l;
  l.aff.w = {{w}};
  l.aff.b = {b};
  l.act = {act};
  l.nonneg = {0};
  AffineMap out = AffineMap::identity(1);
  return Network(1, {l}, out);
}

}  // namespace

TEST_SUITE("network") {

TEST_CASE("eval exact basics") {
  Network fl = single_neuron(Act::floor, Dyadic(1), Dyadic(0));
  CHECK(fl.eval({D(7, -2)}) == std::vector<Dyadic>{Dyadic(1)});
  Network re = single_neuron(Act::relu, Dyadic(-1), Dyadic(0));
  CHECK(re.eval({Dyadic(1)}) == std::vector<Dyadic>{Dyadic(0)});
  AffineMap out;
  out.w = {{Dyadic(2)}};
  out.b = {Dyadic(3)};
  Network aff = Network::affine_only(1, out);
  CHECK(aff.eval({Dyadic(5)}) == std::vector<Dyadic>{Dyadic(13)});
  CHECK(aff.depth() == 0);
  CHECK_THROWS(aff.eval({Dyadic(1), Dyadic(2)}));
}

TEST_CASE("float backend wiring") {
  Network id = identity_network(1);
  CHECK(id.eval_f64({0.5}) == std::vector<double>{0.5});
  AffineMap out;
  out.w = {{Dyadic(2)}};
  out.b = {Dyadic(3)};
  Network aff = Network::affine_only(1, out);
  CHECK(aff.eval_f64({0.25}) == std::vector<double>{3.5});
}

TEST_CASE("floor near one diverges between backends") {
  Network fl = single_neuron(Act::floor, Dyadic(1), Dyadic(0));
  Dyadic x = Dyadic(1) - Dyadic::pow2(-60);
  CHECK(fl.eval({x}) == std::vector<Dyadic>{Dyadic(0)});
  // 1 - 2^-60 rounds to 1.0 in binary64, so the float backend floors to 1
  CHECK(fl.eval_f64({x.to_double()}) == std::vector<double>{1.0});
}

TEST_CASE("compose_serial fuses affine maps") {
  Network g2 = build_gate(2);
  Network g3 = build_gate(3);
  Network comp = compose_serial(g2, g3);
  CHECK(comp.depth() == g2.depth() + g3.depth());
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    Dyadic x = random_unit_dyadic(rng);
    CHECK(comp.eval({x}) == g3.eval(g2.eval({x})));
  }
  CHECK(compose_serial(carry_network(1, 4), carry_network(1, 3)).depth() == 7);
  Network idc = compose_serial(identity_network(1), g2);
  for (int i = 0; i < 20; ++i) {
    Dyadic x = random_unit_dyadic(rng);
    CHECK(idc.eval({x}) == g2.eval({x}));
  }
}

TEST_CASE("stack_parallel concatenates and pads") {
  Network g2 = build_gate(2);
  Network one = stack_parallel({g2});
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    Dyadic x = random_unit_dyadic(rng);
    CHECK(one.eval({x}) == g2.eval({x}));
  }
  Network both = stack_parallel({g2, g2});
  CHECK(both.width() == 2 * g2.width());
  CHECK(both.input_dim() == 2);
  for (int i = 0; i < 50; ++i) {
    Dyadic x = random_unit_dyadic(rng), y = random_unit_dyadic(rng);
    auto v = both.eval({x, y});
    CHECK(v[0] == g2.eval({x})[0]);
    CHECK(v[1] == g2.eval({y})[0]);
  }
  // unequal depths: the shallower member is padded with carry layers
  Network deep = carry_network(1, 5);
  Network mix = stack_parallel({g2, deep});
  CHECK(mix.depth() == 5);
  for (int i = 0; i < 50; ++i) {
    Dyadic x = random_unit_dyadic(rng), y = random_unit_dyadic(rng);
    auto v = mix.eval({x, y});
    CHECK(v[0] == g2.eval({x})[0]);
    CHECK(v[1] == y);
  }
}

TEST_CASE("with_passthrough carries nonnegative values") {
  Network g2 = build_gate(2);
  Network carried = with_passthrough(g2, 1);
  CHECK(carried.width() == g2.width() + 1);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    Dyadic x = random_unit_dyadic(rng), c = random_unit_dyadic(rng);
    auto v = carried.eval({x, c});
    CHECK(v[0] == g2.eval({x})[0]);
    CHECK(v[1] == c);
  }
  auto z = carried.eval({D(1, -1), Dyadic(0)});
  CHECK(z[1] == Dyadic(0));
  CHECK_THROWS_AS(carried.eval({D(1, -1), Dyadic(-1)}), obligation_error);
}

TEST_CASE("obligation errors carry their location") {
  Network c = carry_network(1, 3);
  try {
    c.eval({Dyadic(-2)});
    CHECK(false);
  } catch (const obligation_error& e) {
    CHECK(e.layer() == 0);
    CHECK(e.neuron() == 0);
  }
}

TEST_CASE("audit follows the hidden-layer convention") {
  Layer l1, l2;
  l1.aff = AffineMap::zeros(5, 1);
  l1.act.assign(5, Act::relu);
  l1.nonneg.assign(5, 0);
  l2.aff = AffineMap::zeros(4, 5);
  l2.act.assign(4, Act::relu);
  l2.nonneg.assign(4, 0);
  Network n(1, {l1, l2}, AffineMap::zeros(1, 4));
  auto a = n.audit();
  CHECK(a.width == 5);
  CHECK(a.depth == 2);
  CHECK(a.nonzero_params == 0);

  CHECK(Network::affine_only(1, AffineMap::identity(1)).audit().depth == 0);

  std::mt19937_64 rng(3);
  auto f = build_point_fitter(2, 3, BitString::random(8, rng)).audit();
  CHECK(f.width <= 6);
  CHECK(f.depth == 19);
}

TEST_CASE("audit composes") {
  Network g2 = build_gate(2);
  Network g3 = build_gate(3);
  CHECK(compose_serial(g2, g3).audit().depth == g2.audit().depth + g3.audit().depth);
  CHECK(stack_parallel({g2, g3}).audit().width == g2.audit().width + g3.audit().width);
}

TEST_CASE("affine_wrap fuses without extra depth") {
  Network g2 = build_gate(2);
  Network same = affine_wrap(g2, AffineMap::identity(1), AffineMap::identity(1));
  CHECK(same.depth() == g2.depth());
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    Dyadic x = random_unit_dyadic(rng);
    CHECK(same.eval({x}) == g2.eval({x}));
  }
  // pre: y -> (y + M) / (2M) with M = 2 maps y = 2 to x = 1
  AffineMap pre;
  pre.w = {{D(1, -2)}};
  pre.b = {D(1, -1)};
  Network mapped = affine_wrap(identity_network(1), pre, AffineMap::identity(1));
  CHECK(mapped.eval({Dyadic(2)}) == std::vector<Dyadic>{Dyadic(1)});
  // post: 2*Omega*(.) + c reproduces the staged computation
  AffineMap post;
  post.w = {{Dyadic(2)}};
  post.b = {D(-1, 0)};
  Network scaled = affine_wrap(g2, AffineMap::identity(1), post);
  for (int i = 0; i < 50; ++i) {
    Dyadic x = random_unit_dyadic(rng);
    CHECK(scaled.eval({x})[0] == Dyadic(2) * g2.eval({x})[0] - Dyadic(1));
  }
}

TEST_CASE("carry network is the identity on nonnegatives") {
  Network c = carry_network(2, 4);
  CHECK(c.depth() == 4);
  CHECK(c.width() == 2);
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    Dyadic x = random_unit_dyadic(rng), y = random_unit_dyadic(rng);
    auto v = c.eval({x, y});
    CHECK(v == std::vector<Dyadic>{x, y});
  }
}

TEST_CASE("param_diff_count") {
  std::mt19937_64 rng(31);
  BitString a = BitString::random(8, rng);
  BitString b = a;
  b.set(3, 1 - b.at(3));
  Network fa = build_point_fitter(2, 3, a);
  Network fb = build_point_fitter(2, 3, b);
  CHECK(param_diff_count(fa, fa) == 0);
  CHECK(param_diff_count(fa, fb) == 1);
  CHECK_THROWS(param_diff_count(fa, build_gate(2)));
}

}  // TEST_SUITE

#include "flr/bits.hpp"

#include "helpers.hpp"

using namespace flr;
using namespace flr::testing;

namespace {

// every bitstring of length len, as values k * 2^-len
std::vector<BitString> all_strings(int len) {
  std::vector<BitString> out;
  for (long long k = 0; k < (1LL << len); ++k)
    out.push_back(BitString::from_value(Dyadic(BigInt(k), -len), len));
  return out;
}

}  // namespace

TEST_SUITE("bits") {

TEST_CASE("gate") {
  Network g = build_gate(2);
  auto a = g.audit();
  CHECK(a.width == 2);
  CHECK(a.depth == 2);
  CHECK(g.eval({D(1, -1)})[0] == D(1, -1));
  CHECK(g.eval({Dyadic(-1)})[0] == Dyadic(0));
  CHECK(g.eval({Dyadic(1)})[0] == Dyadic(0));
  CHECK(g.eval({Dyadic(2)})[0] == Dyadic(0));
  // g(1 - delta/2) = (1 - delta)/2 for delta = 1/4
  CHECK(g.eval({D(7, -3)})[0] == D(3, -3));
  // identity on [0, 1 - delta]
  CHECK(g.eval({D(3, -2)})[0] == D(3, -2));
  CHECK(g.eval({Dyadic(0)})[0] == Dyadic(0));
}

TEST_CASE("selection identity") {
  // sum_k g(s_k + k - n) = s_n over random strings
  const int N = 3;
  const std::int64_t J = 2;
  Network g = build_gate(J);
  std::mt19937_64 rng(41);
  for (int t = 0; t < 200; ++t) {
    BitString s = BitString::random(static_cast<std::size_t>(N * J), rng);
    for (int n = 1; n <= N; ++n) {
      Dyadic sum(0);
      for (int k = 1; k <= N; ++k) {
        Dyadic sk = oracle_extract(s, static_cast<std::size_t>((k - 1) * J),
                                   static_cast<std::size_t>(J))
                        .value();
        sum += g.eval({sk + Dyadic(k - n)})[0];
      }
      Dyadic sn = oracle_extract(s, static_cast<std::size_t>((n - 1) * J),
                                 static_cast<std::size_t>(J))
                      .value();
      CHECK(sum == sn);
    }
  }
}

TEST_CASE("block extractor frozen examples") {
  Network net = build_block_extractor(2, 2);
  auto a = net.audit();
  CHECK(a.width <= 4);
  CHECK(a.depth <= 4);
  Dyadic s = D(13, -4);  // bin 0.1101
  CHECK(net.eval({s, Dyadic(1)})[0] == D(3, -2));
  CHECK(net.eval({s, Dyadic(2)})[0] == D(1, -2));
  CHECK(net.eval({Dyadic(0), Dyadic(1)})[0] == Dyadic(0));
  CHECK(net.eval({Dyadic(0), Dyadic(2)})[0] == Dyadic(0));
}

TEST_CASE("block extractor exhaustive vs oracle") {
  for (auto [N, J] : std::vector<std::pair<int, std::int64_t>>{{2, 2}, {3, 2}, {2, 3}}) {
    Network net = build_block_extractor(N, J);
    CHECK(net.audit().width <= 2 * N);
    CHECK(net.audit().depth <= 4);
    for (const auto& s : all_strings(static_cast<int>(N * J))) {
      for (int n = 1; n <= N; ++n) {
        Dyadic want = oracle_extract(s, static_cast<std::size_t>((n - 1) * J),
                                     static_cast<std::size_t>(J))
                          .value();
        CHECK(net.eval({s.value(), Dyadic(n)})[0] == want);
      }
    }
  }
}

TEST_CASE("bit locator frozen examples") {
  Network net = build_bit_locator(2, 2);
  auto a = net.audit();
  CHECK(a.width <= 6);
  CHECK(a.depth == 7 * 2 - 3);
  Dyadic s = BitString::parse("1001").value();
  CHECK(net.eval({s, Dyadic(1)})[0] == D(1, -1));
  CHECK(net.eval({s, Dyadic(4)})[0] == D(1, -1));
  CHECK(net.eval({s, Dyadic(2)})[0] == Dyadic(0));
  CHECK(net.eval({s, Dyadic(3)})[0] == Dyadic(0));
}

TEST_CASE("locator with L=1 matches the one-bit block extractor") {
  for (int N : {2, 3, 4}) {
    Network loc = build_bit_locator(N, 1);
    Network ext = build_block_extractor(N, 1);
    CHECK(loc.audit().depth == 4);
    for (const auto& s : all_strings(N)) {
      for (int m = 1; m <= N; ++m) {
        auto lv = loc.eval({s.value(), Dyadic(m)})[0];
        CHECK(lv == ext.eval({s.value(), Dyadic(m)})[0]);
        CHECK(lv == oracle_extract(s, static_cast<std::size_t>(m - 1), 1).value());
      }
    }
  }
}

TEST_CASE("locator exhaustive and all-ones") {
  Network net = build_bit_locator(2, 3);
  CHECK(net.audit().width <= 6);
  CHECK(net.audit().depth == 7 * 3 - 3);
  for (const auto& s : all_strings(8)) {
    for (int m = 1; m <= 8; ++m)
      CHECK(net.eval({s.value(), Dyadic(m)})[0] ==
            oracle_extract(s, static_cast<std::size_t>(m - 1), 1).value());
  }
  Network n33 = build_bit_locator(3, 3);
  BitString ones(std::vector<std::uint8_t>(27, 1));
  for (int m = 1; m <= 27; ++m) CHECK(n33.eval({ones.value(), Dyadic(m)})[0] == D(1, -1));
}

TEST_CASE("point fitter frozen examples") {
  BitString theta = BitString::parse("1001");
  Network f = build_point_fitter(2, 2, theta);
  auto a = f.audit();
  CHECK(a.width <= 6);
  CHECK(a.depth == 7 * 2 - 2);
  CHECK(f.eval({Dyadic(1)})[0] == Dyadic(1));
  CHECK(f.eval({Dyadic(2)})[0] == Dyadic(0));
  CHECK(f.eval({Dyadic(3)})[0] == Dyadic(0));
  CHECK(f.eval({Dyadic(4)})[0] == Dyadic(1));
  Network z = build_point_fitter(2, 2, BitString::parse("0000"));
  for (int m = 1; m <= 4; ++m) CHECK(z.eval({Dyadic(m)})[0] == Dyadic(0));
  CHECK_THROWS(build_point_fitter(2, 2, BitString::parse("000")));
}

TEST_CASE("fitter is independent of the table except one constant") {
  std::mt19937_64 rng(43);
  BitString a = BitString::random(9, rng), b = BitString::random(9, rng);
  while (b == a) b = BitString::random(9, rng);
  CHECK(param_diff_count(build_point_fitter(3, 2, a), build_point_fitter(3, 2, b)) == 1);
}

TEST_CASE("fitter randomized tables") {
  std::mt19937_64 rng(47);
  for (auto [N, L] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}}) {
    std::int64_t len = checked_pow(N, L);
    for (int t = 0; t < 25; ++t) {
      BitString theta = BitString::random(static_cast<std::size_t>(len), rng);
      Network f = build_point_fitter(N, L, theta);
      for (std::int64_t m = 1; m <= len; ++m)
        CHECK(f.eval({Dyadic(m)})[0] == Dyadic(theta.at(static_cast<std::size_t>(m - 1))));
    }
  }
}

TEST_CASE("checked_pow caps the table size") {
  CHECK(checked_pow(2, 10) == 1024);
  CHECK(checked_pow(2, 22) == kMaxTableSize);
  CHECK_THROWS(checked_pow(2, 23));
  CHECK_THROWS(checked_pow(3, 20));
}

}  // TEST_SUITE

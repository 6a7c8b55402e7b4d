#include "doctest.h"

#include "hetdof/errors.hpp"
#include "hetdof/topology.hpp"

#include <algorithm>
#include <set>

using namespace hetdof;

namespace {

using IntSet = std::set<int>;

IntSet as_set(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// Independent restatement of the support rule: SB i reaches MT j iff
// j - ceil(L_T/2) <= i <= j + floor(L_T/2).
bool reaches_by_rule(int sb, int mt, int L_T) {
  return sb >= mt - (L_T + 1) / 2 && sb <= mt + L_T / 2;
}

}  // namespace

TEST_CASE("NetworkConfig validates its parameters") {
  CHECK_NOTHROW(NetworkConfig(6, 2, 3, 2, 2, 1));
  CHECK_THROWS_AS(NetworkConfig(7, 2, 3, 2, 2, 1), InputError);
  CHECK_THROWS_AS(NetworkConfig(6, 2, 3, 0, 2, 1), InputError);
  CHECK_THROWS_AS(NetworkConfig(6, 2, 3, 2, -1, 1), InputError);
  CHECK_THROWS_AS(NetworkConfig(6, 2, 3, 2, 2, -1), InputError);
  CHECK(NetworkConfig::linear(3, 2, 2, 2, 1).K == 6);
}

TEST_CASE("transmission interferers follow the window rule") {
  SUBCASE("K=5, L_T=2") {
    const auto g = build_transmission_interference(5, 2);
    CHECK(as_set(g.interferers(3)) == IntSet{2, 4});
  }
  SUBCASE("K=5, L_T=0 has no interference") {
    const auto g = build_transmission_interference(5, 0);
    for (int i = 1; i <= 5; ++i) CHECK(g.interferers(i).empty());
  }
  SUBCASE("K=6, L_T=3") {
    const auto g = build_transmission_interference(6, 3);
    CHECK(as_set(g.interferers(4)) == IntSet{2, 3, 5});
    CHECK(as_set(g.interferers(1)) == IntSet{2});
  }
}

TEST_CASE("interferer sets agree with the support rule for every pair") {
  for (int L_T = 0; L_T <= 5; ++L_T) {
    const int K = 12;
    const auto g = build_transmission_interference(K, L_T);
    for (int mt = 1; mt <= K; ++mt) {
      const IntSet got = as_set(g.interferers(mt));
      CHECK(got.count(mt) == 0);
      for (int sb = 1; sb <= K; ++sb) {
        const bool expected = sb != mt && reaches_by_rule(sb, mt, L_T);
        CHECK(got.count(sb) == static_cast<std::size_t>(expected));
        CHECK(g.hears(mt, sb) == reaches_by_rule(sb, mt, L_T));
      }
      if (mt > L_T && mt <= K - L_T) CHECK(static_cast<int>(got.size()) == L_T);
    }
    for (int sb = 1; sb <= K; ++sb) {
      for (int mt : g.reached_by(sb)) CHECK(g.hears(mt, sb));
    }
  }
}

TEST_CASE("backhaul clusters and footprints") {
  SUBCASE("S=3, K_B=2, L_B=1") {
    const auto a = build_backhaul_association(NetworkConfig::linear(3, 2, 1, 1, 1));
    CHECK(as_set(a.cluster(1)) == IntSet{1, 2, 3});
    CHECK(as_set(a.footprint(1)) == IntSet{1, 2, 3, 4});
    CHECK(as_set(a.footprint(2)) == IntSet{4, 5, 6});
  }
  SUBCASE("S=5, K_B=3, L_B=1") {
    const auto a = build_backhaul_association(NetworkConfig::linear(5, 3, 1, 1, 1));
    CHECK(as_set(a.footprint(2)) == IntSet{6, 7, 8, 9, 10, 11});
  }
  SUBCASE("S=3, K_B=3, L_B=2") {
    const auto a = build_backhaul_association(NetworkConfig::linear(3, 3, 1, 1, 2));
    CHECK(as_set(a.footprint(2)) == IntSet{3, 4, 5, 6, 7});
  }
}

TEST_CASE("clusters partition the SBs and footprints grow with L_B") {
  for (int S = 1; S <= 5; ++S) {
    for (int K_B = 1; K_B <= 4; ++K_B) {
      std::vector<int> seen(S * K_B + 1, 0);
      for (int L_B = 0; L_B <= 4; ++L_B) {
        const auto a = build_backhaul_association(NetworkConfig::linear(S, K_B, 1, 1, L_B));
        const auto wider = build_backhaul_association(NetworkConfig::linear(S, K_B, 1, 1, L_B + 1));
        for (int mb = 1; mb <= K_B; ++mb) {
          const IntSet fp = as_set(a.footprint(mb));
          CHECK(static_cast<int>(fp.size()) <= S + L_B);
          for (int sb : a.cluster(mb)) {
            CHECK(fp.count(sb) == 1);
            CHECK(a.owner(sb) == mb);
          }
          const IntSet fp2 = as_set(wider.footprint(mb));
          CHECK(std::includes(fp2.begin(), fp2.end(), fp.begin(), fp.end()));
        }
      }
      const auto a = build_backhaul_association(NetworkConfig::linear(S, K_B, 1, 1, 1));
      for (int mb = 1; mb <= K_B; ++mb) {
        for (int sb : a.cluster(mb)) ++seen[sb];
        CHECK(a.cluster(mb).front() == (mb - 1) * S + 1);
        CHECK(static_cast<int>(a.cluster(mb).size()) == S);
      }
      for (int sb = 1; sb <= S * K_B; ++sb) CHECK(seen[sb] == 1);
    }
  }
}

TEST_CASE("active footprint receivers, linear") {
  const auto a = build_backhaul_association(NetworkConfig::linear(3, 2, 2, 2, 1));
  const std::vector<int> r1{4};
  const std::vector<int> r2{5, 6};
  CHECK(active_footprint_receivers(a, 1, r1) == std::vector<int>{4});
  CHECK(active_footprint_receivers(a, 1, r2).empty());
}

TEST_CASE("hexagonal block map") {
  SUBCASE("single block has no neighbours") {
    const auto [g, hex] = build_hexagonal(1, 1);
    CHECK(g.node_count() == 9);
    CHECK(as_set(hex.footprint(1)) == IntSet{1, 2, 3, 4, 5, 6, 7, 8, 9});
  }
  SUBCASE("2x2 footprints pick the facing rows and columns") {
    const auto [g, hex] = build_hexagonal(2, 2);
    CHECK(g.node_count() == 36);
    CHECK(g.symmetric());
    // Block (1,1): below is (2,1) -> positions {1,2,3}; right is (1,2) -> {1,4,7}.
    IntSet expected;
    for (int p = 1; p <= 9; ++p) expected.insert(hex.node_of(1, 1, p));
    for (int p : {1, 2, 3}) expected.insert(hex.node_of(2, 1, p));
    for (int p : {1, 4, 7}) expected.insert(hex.node_of(1, 2, p));
    CHECK(as_set(hex.footprint(hex.mb_of_block(1, 1))) == expected);
    // Block (2,2): above (1,2) -> {7,8,9}; left (2,1) -> {3,6,9}.
    IntSet expected22;
    for (int p = 1; p <= 9; ++p) expected22.insert(hex.node_of(2, 2, p));
    for (int p : {7, 8, 9}) expected22.insert(hex.node_of(1, 2, p));
    for (int p : {3, 6, 9}) expected22.insert(hex.node_of(2, 1, p));
    CHECK(as_set(hex.footprint(hex.mb_of_block(2, 2))) == expected22);
  }
  SUBCASE("interior blocks see 21 nodes") {
    const auto [g, hex] = build_hexagonal(3, 3);
    const int mid = hex.mb_of_block(2, 2);
    CHECK(hex.interior(mid));
    CHECK(hex.footprint(mid).size() == 21);
    for (int mb = 1; mb <= hex.block_count(); ++mb) {
      CHECK(hex.cluster(mb).size() == 9);
      CHECK(hex.footprint(mb).size() <= 21);
    }
  }
}

TEST_CASE("default hexagonal classes are independent sets") {
  for (auto [rows, cols] : {std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 3}, std::pair{1, 4}}) {
    const auto edges = default_hex_edges(rows, cols);
    const HexBlockMap hex(rows, cols);
    CHECK_FALSE(edges.empty());
    for (const auto& [a, b] : edges) {
      CHECK(a < b);
      // Every edge joins the two classes, so each class is independent.
      CHECK(hex_class_a(hex.position_of(a)) != hex_class_a(hex.position_of(b)));
    }
  }
}

TEST_CASE("hexagonal class-A receivers seen by an interior block") {
  const auto [g, hex] = build_hexagonal(3, 3);
  std::vector<int> receiving;
  for (int node = 1; node <= hex.node_count(); ++node) {
    if (hex_class_a(hex.position_of(node))) receiving.push_back(node);
  }
  const auto got = active_footprint_receivers(hex, hex.mb_of_block(2, 2), receiving);
  IntSet expected;
  for (int p : {7, 8, 9}) expected.insert(hex.node_of(1, 2, p));
  expected.insert(hex.node_of(3, 2, 1));
  for (int p : {1, 4, 7}) expected.insert(hex.node_of(2, 3, p));
  expected.insert(hex.node_of(2, 1, 9));
  CHECK(as_set(got) == expected);
  CHECK(got.size() == 8);
}

TEST_CASE("explicit hexagonal edges are validated") {
  CHECK_THROWS_AS(build_hexagonal(1, 1, std::vector<Edge>{{1, 1}}), InputError);
  CHECK_THROWS_AS(build_hexagonal(1, 1, std::vector<Edge>{{1, 10}}), InputError);
  const auto [g, hex] = build_hexagonal(1, 1, std::vector<Edge>{{1, 2}});
  CHECK(g.hears(1, 2));
  CHECK(g.hears(2, 1));
  CHECK_FALSE(g.hears(1, 3));
}

TEST_CASE("structural invertibility is a perfect-matching test") {
  const auto g = build_transmission_interference(6, 2);
  const std::vector<int> sbs{1, 2, 3};
  const std::vector<int> mts{1, 2, 3};
  CHECK(structurally_invertible(g, sbs, mts));
  // MT 6 hears SBs 4..6 only; no SB of {1,2,3} reaches it.
  const std::vector<int> far{1, 2, 6};
  CHECK_FALSE(structurally_invertible(g, sbs, far));
  const std::vector<int> short_mts{1, 2};
  CHECK_FALSE(structurally_invertible(g, sbs, short_mts));
}

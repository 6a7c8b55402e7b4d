#include "doctest.h"

#include "hetdof/errors.hpp"
#include "hetdof/schemes.hpp"
#include "hetdof/simulator.hpp"

#include <algorithm>
#include <set>

using namespace hetdof;

namespace {

using IntSet = std::set<int>;

IntSet targets_of(const SlotPlan& slot, int mb) {
  const BackhaulPlan* p = slot.find_mb(mb);
  if (p == nullptr) return {};
  const auto v = p->target_sbs();
  return {v.begin(), v.end()};
}

IntSet nulls_of(const SlotPlan& slot, int mb) {
  const BackhaulPlan* p = slot.find_mb(mb);
  if (p == nullptr) return {};
  return {p->nulls.begin(), p->nulls.end()};
}

// Odd template slots are slots 1 and 3; slot 2 delivers the even pattern.
const SlotPlan& odd_slot(const Schedule& s) { return s.at(3); }
const SlotPlan& even_slot(const Schedule& s) { return s.at(2); }

int max_antennas(const Schedule& s) {
  int worst = 0;
  for (const auto& slot : s.slots) {
    for (const auto& b : slot.backhaul) worst = std::max(worst, b.antennas_used());
  }
  return worst;
}

}  // namespace

TEST_CASE("scheme selection") {
  auto pick = [](int S, int N, int L_T) { return select_scheme(NetworkConfig::linear(S, 4, N, L_T, 1)); };
  CHECK(pick(3, 2, 2).case_label == "1A");
  CHECK(pick(3, 2, 2).predicted == Rational(1, 2));
  CHECK(pick(5, 2, 2).case_label == "2");
  CHECK(pick(5, 2, 2).predicted == Rational(2, 5));
  CHECK(pick(4, 2, 2).case_label == "3");
  CHECK(pick(4, 2, 2).predicted == Rational(3, 8));
  CHECK(pick(4, 3, 2).case_label == "1B");
  CHECK(pick(5, 3, 3).case_label == "T3-A");
  CHECK(pick(5, 3, 3).predicted == Rational(1, 2));
  CHECK(pick(5, 2, 3).case_label == "T3-B");
  CHECK(pick(5, 2, 3).predicted == Rational(2, 5));
  CHECK(pick(6, 3, 3).case_label == "T3-C");
  CHECK(pick(6, 3, 3).predicted == Rational(5, 12));
  CHECK(pick(5, 5, 3).case_label == "T2");
  CHECK(pick(2, 2, 3).case_label == "T2");
  CHECK_THROWS_AS(pick(1, 1, 3), UnsupportedConfiguration);
  CHECK_THROWS_AS(pick(3, 1, 5), UnsupportedConfiguration);
}

TEST_CASE("predicted puDoF always lies in [0, 1/2]") {
  for (int S = 1; S <= 8; ++S) {
    for (int N = 1; N <= 8; ++N) {
      for (int L_T = 0; L_T <= 6; ++L_T) {
        try {
          const auto d = select_scheme(NetworkConfig::linear(S, 3, N, L_T, 1));
          CHECK(d.predicted >= Rational(0));
          CHECK(d.predicted <= Rational(1, 2));
        } catch (const UnsupportedConfiguration&) {
        }
      }
    }
  }
}

TEST_CASE("theorem 1, S=3, N=2: odd-slot pattern and the single null") {
  const auto topo = make_linear_topology(NetworkConfig::linear(3, 4, 2, 2, 1));
  const auto s = scheme_theorem1(topo);
  CHECK(s.scheme.case_label == "1A");
  CHECK(targets_of(odd_slot(s), 1) == IntSet{1, 3});
  CHECK(targets_of(odd_slot(s), 2) == IntSet{5});
  CHECK(nulls_of(odd_slot(s), 2) == IntSet{7});
  CHECK(nulls_of(odd_slot(s), 1).empty());
  CHECK(targets_of(even_slot(s), 1) == IntSet{2});
  CHECK(targets_of(even_slot(s), 2) == IntSet{4, 6});
  CHECK(s.at(1).transmission.empty());
}

TEST_CASE("theorem 1, S=5, N=2: two disjoint sets and no nulls") {
  const auto topo = make_linear_topology(NetworkConfig::linear(5, 4, 2, 2, 1));
  const auto s = scheme_theorem1(topo);
  CHECK(s.scheme.case_label == "2");
  CHECK(targets_of(odd_slot(s), 1) == IntSet{3, 5});
  CHECK(targets_of(odd_slot(s), 2) == IntSet{7, 9});
  CHECK(targets_of(even_slot(s), 1) == IntSet{2, 4});
  CHECK(targets_of(even_slot(s), 2) == IntSet{8, 10});
  for (const auto& slot : s.slots) {
    for (const auto& b : slot.backhaul) CHECK(b.nulls.empty());
  }
}

TEST_CASE("theorem 1, S=4, N=2: alternating {3} and {2,4}") {
  const auto topo = make_linear_topology(NetworkConfig::linear(4, 3, 2, 2, 1));
  const auto s = scheme_theorem1(topo);
  CHECK(s.scheme.case_label == "3");
  for (int mb = 1; mb <= 3; ++mb) {
    const int base = 4 * (mb - 1);
    CHECK(targets_of(odd_slot(s), mb) == IntSet{base + 3});
    CHECK(targets_of(even_slot(s), mb) == IntSet{base + 2, base + 4});
  }
}

TEST_CASE("theorem 1 antenna economy") {
  for (int S = 1; S <= 7; ++S) {
    for (int N = 1; N <= 5; ++N) {
      for (int L_T : {0, 1, 2}) {
        const auto topo = make_linear_topology(NetworkConfig::linear(S, 4, N, L_T, 1));
        Schedule s;
        try {
          s = scheme_theorem1(topo);
        } catch (const UnsupportedConfiguration&) {
          continue;
        }
        const auto& label = s.scheme.case_label;
        const int cap = label == "1A" ? (S + 1) / 2 : label == "1B" ? S / 2 + 1 : N;
        CHECK(max_antennas(s) <= cap);
        CHECK(max_antennas(s) <= N);
      }
    }
  }
}

TEST_CASE("theorem 2 groups whole clusters on alternate slots") {
  const auto topo = make_linear_topology(NetworkConfig::linear(5, 4, 5, 3, 1));
  const auto s = scheme_theorem2(topo);
  for (int t = 2; t <= 3; ++t) {
    const auto& slot = s.at(t);
    REQUIRE(slot.transmission.size() == 2);
    std::vector<int> starts;
    for (const auto& g : slot.transmission) {
      CHECK(g.kind == PayloadKind::group_combination);
      CHECK(g.sbs.size() == 5);
      CHECK(g.sbs == g.mts);
      starts.push_back(g.sbs.front());
    }
    std::sort(starts.begin(), starts.end());
    CHECK(starts[1] - (starts[0] + 4) - 1 == 5);  // separation F = S
  }
  CHECK_NOTHROW(scheme_theorem2(make_linear_topology(NetworkConfig::linear(2, 4, 2, 3, 1))));
  CHECK_THROWS_AS(scheme_theorem2(make_linear_topology(NetworkConfig::linear(1, 4, 1, 3, 1))),
                  UnsupportedConfiguration);
}

TEST_CASE("theorem 3 receive sets") {
  SUBCASE("case B, S=5, N=2") {
    const auto s = scheme_theorem3(make_linear_topology(NetworkConfig::linear(5, 3, 2, 3, 1)));
    CHECK(s.scheme.case_label == "T3-B");
    CHECK(targets_of(odd_slot(s), 2) == IntSet{7, 8});
    CHECK(targets_of(even_slot(s), 2) == IntSet{9, 10});
  }
  SUBCASE("case A, S=5, N=3: one null at the next cluster's first SB") {
    const auto s = scheme_theorem3(make_linear_topology(NetworkConfig::linear(5, 3, 3, 3, 1)));
    CHECK(s.scheme.case_label == "T3-A");
    CHECK(targets_of(odd_slot(s), 1) == IntSet{1, 2});
    CHECK(nulls_of(odd_slot(s), 1) == IntSet{6});
    CHECK(targets_of(even_slot(s), 1) == IntSet{3, 4, 5});
    CHECK(nulls_of(even_slot(s), 1).empty());
  }
  SUBCASE("case C, S=6, N=3") {
    const auto s = scheme_theorem3(make_linear_topology(NetworkConfig::linear(6, 3, 3, 3, 1)));
    CHECK(s.scheme.case_label == "T3-C");
    CHECK(targets_of(odd_slot(s), 1) == IntSet{2, 3});
    CHECK(targets_of(even_slot(s), 1) == IntSet{4, 5, 6});
  }
}

TEST_CASE("hexagonal antenna use") {
  const auto topo = make_hexagonal_topology(3, 3, 13);
  const auto s = scheme_hexagonal(topo);
  const int mid = topo.hex->mb_of_block(2, 2);
  const BackhaulPlan* odd = odd_slot(s).find_mb(mid);
  const BackhaulPlan* even = even_slot(s).find_mb(mid);
  REQUIRE(odd != nullptr);
  REQUIRE(even != nullptr);
  CHECK(odd->targets.size() == 5);
  CHECK(odd->nulls.size() == 8);
  CHECK(odd->antennas_used() == 13);
  CHECK(even->targets.size() == 4);
  CHECK(even->nulls.size() == 4);

  const auto single = scheme_hexagonal(make_hexagonal_topology(1, 1, 13));
  for (const auto& slot : single.slots) {
    for (const auto& b : slot.backhaul) CHECK(b.nulls.empty());
  }
  CHECK_THROWS_AS(scheme_hexagonal(make_hexagonal_topology(2, 2, 12)), UnsupportedConfiguration);
}

TEST_CASE("every generated schedule passes the structural audit") {
  int checked = 0;
  for (int S = 1; S <= 7; ++S) {
    for (int N = 1; N <= 7; ++N) {
      for (int L_T = 0; L_T <= 5; ++L_T) {
        const auto topo = make_linear_topology(NetworkConfig::linear(S, 4, N, L_T, 1));
        Schedule s;
        try {
          s = generate_schedule(topo);
        } catch (const UnsupportedConfiguration&) {
          continue;
        }
        const auto v = audit_schedule(s, topo);
        CHECK_MESSAGE(v.empty(), "S=", S, " N=", N, " L_T=", L_T, " ", (v.empty() ? "" : v.front().detail));
        ++checked;
      }
    }
  }
  for (int n = 1; n <= 3; ++n) {
    const auto topo = make_hexagonal_topology(n, n, 13);
    CHECK(audit_schedule(generate_schedule(topo), topo).empty());
  }
  CHECK(checked > 100);
}

TEST_CASE("L_T <= 2 schedules transmit on independent sets") {
  for (int S = 2; S <= 6; ++S) {
    for (int N = 1; N <= 4; ++N) {
      for (int L_T : {1, 2}) {
        const auto topo = make_linear_topology(NetworkConfig::linear(S, 3, N, L_T, 1));
        const auto s = scheme_theorem1(topo);
        for (int t = 2; t <= 3; ++t) {
          const auto active = s.at(t).transmitting_sbs();
          for (const auto& g : s.at(t).transmission) {
            REQUIRE(g.sbs.size() == 1);
            for (int sb : topo.transmission.heard_by(g.mts.front())) {
              const bool is_active = std::binary_search(active.begin(), active.end(), sb);
              CHECK((!is_active || sb == g.sbs.front()));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("larger L_B enlarges null sets or is refused") {
  const auto topo = make_linear_topology(NetworkConfig::linear(5, 4, 3, 2, 2));
  Schedule s;
  try {
    s = generate_schedule(topo);
  } catch (const UnsupportedConfiguration&) {
    return;
  }
  CHECK(audit_schedule(s, topo).empty());
  CHECK(max_antennas(s) <= 3);
}

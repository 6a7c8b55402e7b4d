#include "doctest.h"

#include "hetdof/errors.hpp"
#include "hetdof/precoding.hpp"
#include "hetdof/schemes.hpp"

using namespace hetdof;

namespace {

Topology small_linear(int N) { return make_linear_topology(NetworkConfig::linear(3, 2, N, 2, 1)); }

// Minimum-norm solution via the normal equations, x = H^H (H H^H)^{-1} w.
Eigen::VectorXcd min_norm_reference(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& w) {
  const Eigen::MatrixXcd gram = H * H.adjoint();
  return H.adjoint() * gram.fullPivLu().solve(w);
}

}  // namespace

TEST_CASE("single antenna, single target inverts the scalar channel") {
  const auto topo = small_linear(1);
  const auto ch = sample_channels(topo, 9);
  const BackhaulTask task{1, {{2, cd{1.0, 0.0}}}, {}};
  const auto x = solve_backhaul_precoder(task, ch);
  const cd h = ch.backhaul_vector(1, 2)(0);
  REQUIRE(x.size() == 1);
  CHECK(std::abs(x(0) - std::conj(h) / std::norm(h)) < 1e-12);
}

TEST_CASE("target plus null at N=2 satisfies both constraints") {
  const auto topo = small_linear(2);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto ch = sample_channels(topo, seed);
    const cd w{0.3, -1.2};
    const BackhaulTask task{1, {{1, w}}, {4}};
    const auto x = solve_backhaul_precoder(task, ch);
    const cd at_target = ch.backhaul_vector(1, 1).transpose() * x;
    const cd at_null = ch.backhaul_vector(1, 4).transpose() * x;
    CHECK(std::abs(at_target - w) / (1 + std::abs(w)) <= 1e-10);
    CHECK(std::abs(at_null) <= 1e-10);
    CHECK(verify_zero_forcing(task, x, ch) <= kSolverTolerance);
  }
}

TEST_CASE("too many constraints is an infeasible shape") {
  const auto topo = small_linear(2);
  const auto ch = sample_channels(topo, 1);
  const BackhaulTask task{1, {{1, 1.0}, {2, 1.0}}, {3}};
  CHECK_THROWS_AS(solve_backhaul_precoder(task, ch), InfeasibleShape);
}

TEST_CASE("rank-deficient backhaul system is a genericity violation") {
  const auto topo = small_linear(2);
  auto ch = sample_channels(topo, 1);
  ch.backhaul[{1, 3}] = 2.0 * ch.backhaul[{1, 1}];
  const std::vector<int> targets{1, 3};
  const std::vector<int> nulls;
  CHECK_THROWS_AS(backhaul_precoder_basis(1, targets, nulls, ch), GenericityViolation);
}

TEST_CASE("underdetermined solves return the minimum-norm precoder") {
  const auto topo = make_linear_topology(NetworkConfig::linear(3, 2, 4, 2, 1));
  const auto ch = sample_channels(topo, 17);
  const BackhaulTask task{1, {{1, cd{1.0, 2.0}}, {3, cd{-0.5, 0.0}}}, {4}};
  const auto x = solve_backhaul_precoder(task, ch);
  const std::vector<int> rows{1, 3, 4};
  const auto H = backhaul_constraint_matrix(1, rows, ch);
  Eigen::VectorXcd w(3);
  w << cd{1.0, 2.0}, cd{-0.5, 0.0}, cd{0.0, 0.0};
  CHECK((x - min_norm_reference(H, w)).norm() <= 1e-10 * (1 + x.norm()));
}

TEST_CASE("scaling the payloads scales the precoder") {
  const auto topo = make_linear_topology(NetworkConfig::linear(3, 2, 3, 2, 1));
  const auto ch = sample_channels(topo, 23);
  const cd c{0.7, -2.1};
  const BackhaulTask a{1, {{1, cd{1.0, 0.5}}, {2, cd{-1.0, 0.0}}}, {4}};
  BackhaulTask b = a;
  for (auto& t : b.targets) t.second *= c;
  const auto xa = solve_backhaul_precoder(a, ch);
  const auto xb = solve_backhaul_precoder(b, ch);
  CHECK((xb - c * xa).norm() <= 1e-10 * (1 + xb.norm()));
}

TEST_CASE("feasibility boundary is exactly N constraints") {
  for (int N = 1; N <= 4; ++N) {
    const auto topo = make_linear_topology(NetworkConfig::linear(3, 2, N, 2, 1));
    const auto ch = sample_channels(topo, 2);
    std::vector<int> sbs{1, 2, 3, 4};
    for (int used = 1; used <= 4; ++used) {
      const std::vector<int> targets(sbs.begin(), sbs.begin() + 1);
      const std::vector<int> nulls(sbs.begin() + 1, sbs.begin() + used);
      if (used <= N) {
        CHECK_NOTHROW(backhaul_precoder_basis(1, targets, nulls, ch));
      } else {
        CHECK_THROWS_AS(backhaul_precoder_basis(1, targets, nulls, ch), InfeasibleShape);
      }
    }
  }
}

TEST_CASE("group combinations") {
  SUBCASE("A=1 divides by the direct gain") {
    const auto topo = small_linear(2);
    const auto ch = sample_channels(topo, 4);
    const GroupPlan plan{{2}, {2}, {cd{0.0, 1.0}}};
    const auto x = solve_group_combinations(plan, ch);
    CHECK(std::abs(x.at(2) - cd{0.0, 1.0} / ch.gain(2, 2)) < 1e-12);
  }
  SUBCASE("A=2 on a banded matrix") {
    const auto topo = small_linear(2);
    const auto ch = sample_channels(topo, 4);
    const GroupPlan plan{{1, 2}, {1, 2}, {cd{1.0, 0.0}, cd{-1.0, 1.0}}};
    const auto x = solve_group_combinations(plan, ch);
    for (std::size_t m = 0; m < 2; ++m) {
      cd y{};
      for (int sb : plan.sbs) y += ch.gain(sb, plan.mts[m]) * x.at(sb);
      CHECK(std::abs(y - plan.message_values[m]) / (1 + std::abs(plan.message_values[m])) <= 1e-10);
    }
    CHECK(verify_zero_forcing(plan, x, ch) <= kSolverTolerance);
  }
  SUBCASE("A=5 cluster group at L_T=3") {
    const auto topo = make_linear_topology(NetworkConfig::linear(5, 2, 5, 3, 1));
    const auto ch = sample_channels(topo, 8);
    GroupPlan plan{{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}, {}};
    for (int k = 0; k < 5; ++k) plan.message_values.push_back(std::polar(1.0, 0.4 * k));
    const auto x = solve_group_combinations(plan, ch);
    // Every MT of the cluster hears only cluster SBs when SBs 6..10 are silent.
    for (std::size_t m = 0; m < 5; ++m) {
      cd y{};
      for (int sb : topo.transmission.heard_by(plan.mts[m])) {
        if (x.count(sb)) y += ch.gain(sb, plan.mts[m]) * x.at(sb);
      }
      CHECK(std::abs(y - plan.message_values[m]) <= 1e-9 * 2);
    }
  }
  SUBCASE("singular group is a genericity violation") {
    const auto topo = small_linear(2);
    const auto ch = sample_channels(topo, 4);
    const GroupPlan plan{{1}, {6}, {cd{1.0, 0.0}}};
    CHECK_THROWS_AS(solve_group_combinations(plan, ch), GenericityViolation);
  }
}

TEST_CASE("zero-forcing audit residuals") {
  const auto topo = small_linear(2);
  const auto ch = sample_channels(topo, 6);
  const cd w{2.0, 0.0};
  const BackhaulTask task{1, {{1, w}}, {4}};
  auto x = solve_backhaul_precoder(task, ch);
  CHECK(verify_zero_forcing(task, x, ch) <= 1e-10);

  Eigen::VectorXcd bumped = x;
  bumped(0) += 1e-3;
  CHECK(verify_zero_forcing(task, bumped, ch) > 1e-6);

  const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
  CHECK(verify_zero_forcing(task, zero, ch) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("substitution identity across 100 seeds for every scheme task") {
  const std::vector<Topology> topos = {
      make_linear_topology(NetworkConfig::linear(3, 4, 2, 2, 1)),
      make_linear_topology(NetworkConfig::linear(5, 4, 3, 3, 1)),
      make_hexagonal_topology(2, 2, 13),
  };
  for (const auto& topo : topos) {
    const Schedule sched = generate_schedule(topo);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto ch = sample_channels(topo, seed);
      double worst = 0.0;
      for (const auto& slot : sched.slots) {
        for (const auto& b : slot.backhaul) {
          BackhaulTask task{b.mb, {}, b.nulls};
          for (std::size_t k = 0; k < b.targets.size(); ++k) {
            task.targets.push_back({b.targets[k].sb, std::polar(1.0, 0.3 * static_cast<double>(k))});
          }
          worst = std::max(worst, verify_zero_forcing(task, solve_backhaul_precoder(task, ch), ch));
        }
      }
      CHECK(worst <= 1e-9);
    }
  }
}

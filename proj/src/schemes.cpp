#include "hetdof/schemes.hpp"

#include "hetdof/errors.hpp"

#include <algorithm>
#include <set>

namespace hetdof {

namespace {

int ceil_half(int x) { return (x + 1) / 2; }

/// Per-MB receive sets (global SB indices) of one slot parity; index mb-1.
using ReceivePattern = std::vector<std::vector<int>>;

/// Cluster positions [lo, hi] stepping by `step` of MB i, as global SB indices.
std::vector<int> positions(const NetworkConfig& cfg, int i, int lo, int hi, int step = 1) {
  std::vector<int> out;
  for (int p = lo; p <= hi; p += step) {
    if (p >= 1 && p <= cfg.S) out.push_back((i - 1) * cfg.S + p);
  }
  return out;
}

const NetworkConfig& linear_config(const Topology& topo) {
  if (topo.kind != TopologyKind::linear || !topo.config) {
    throw UnsupportedConfiguration("scheme requires a linear topology");
  }
  return *topo.config;
}

int group_id(int mb, bool odd_delivery) { return 2 * mb - (odd_delivery ? 1 : 0); }

/// Backhaul plans for one slot: targets from the pattern, nulls from the
/// footprint rule, content pointing at the groups of the following slot.
std::vector<BackhaulPlan> backhaul_for(const Topology& topo, const ReceivePattern& pattern,
                                       PayloadKind kind, bool odd_delivery) {
  std::vector<int> receiving;
  for (const auto& r : pattern) receiving.insert(receiving.end(), r.begin(), r.end());
  std::sort(receiving.begin(), receiving.end());

  std::vector<BackhaulPlan> plans;
  for (int mb = 1; mb <= topo.mb_count(); ++mb) {
    const auto& targets = pattern[mb - 1];
    if (targets.empty()) continue;
    BackhaulPlan plan;
    plan.mb = mb;
    for (int sb : targets) {
      const Content content = kind == PayloadKind::raw_message
                                  ? Content{kind, sb}
                                  : Content{kind, group_id(mb, odd_delivery)};
      plan.targets.push_back({sb, content});
    }
    plan.nulls = topo.hex ? active_footprint_receivers(*topo.hex, mb, receiving)
                          : active_footprint_receivers(topo.backhaul, mb, receiving);
    if (plan.antennas_used() > topo.N) {
      throw UnsupportedConfiguration("MB " + std::to_string(mb) + " needs " +
                                     std::to_string(plan.antennas_used()) +
                                     " antennas (targets plus nulls) but N = " +
                                     std::to_string(topo.N));
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

/// Transmission groups carrying what `pattern` delivered in the previous slot.
std::vector<TransmissionGroup> groups_for(const ReceivePattern& pattern, PayloadKind kind,
                                          bool odd_delivery) {
  std::vector<TransmissionGroup> groups;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    const auto& sbs = pattern[i];
    if (sbs.empty()) continue;
    if (kind == PayloadKind::raw_message) {
      for (int sb : sbs) groups.push_back({sb, kind, {sb}, {sb}});
    } else {
      groups.push_back({group_id(static_cast<int>(i) + 1, odd_delivery), kind, sbs, sbs});
    }
  }
  return groups;
}

std::vector<int> silent_pairs(int K, const std::vector<TransmissionGroup>& groups) {
  std::vector<bool> active(K + 1, false);
  for (const auto& g : groups) {
    for (int sb : g.sbs) active[sb] = true;
  }
  std::vector<int> out;
  for (int k = 1; k <= K; ++k) {
    if (!active[k]) out.push_back(k);
  }
  return out;
}

/// Warm-up slot delivering `odd`, then the cycle (deliver even / send odd),
/// (deliver odd / send even).
Schedule pipeline(const Topology& topo, SchemeDescriptor scheme, const ReceivePattern& odd,
                  const ReceivePattern& even, PayloadKind kind) {
  Schedule s;
  s.scheme = std::move(scheme);
  s.warmup = 1;
  s.period = 2;
  s.cyclic = true;

  SlotPlan warm;
  warm.backhaul = backhaul_for(topo, odd, kind, true);
  warm.deactivated = silent_pairs(topo.K, {});

  SlotPlan even_slot;
  even_slot.backhaul = backhaul_for(topo, even, kind, false);
  even_slot.transmission = groups_for(odd, kind, true);
  even_slot.deactivated = silent_pairs(topo.K, even_slot.transmission);

  SlotPlan odd_slot;
  odd_slot.backhaul = backhaul_for(topo, odd, kind, true);
  odd_slot.transmission = groups_for(even, kind, false);
  odd_slot.deactivated = silent_pairs(topo.K, odd_slot.transmission);

  s.slots = {std::move(warm), std::move(even_slot), std::move(odd_slot)};
  return s;
}

}  // namespace

SchemeDescriptor select_scheme(const NetworkConfig& cfg) {
  const int S = cfg.S, N = cfg.N;
  if (cfg.L_T <= 2) {
    if (2 * N < S) return {1, "2", Rational(N, S)};
    if (2 * N == S) return {1, "3", Rational(S - 1, 2 * S)};
    return {1, S % 2 == 1 ? "1A" : "1B", Rational(1, 2)};
  }
  const int need = ceil_half(cfg.L_T);
  if (N >= S && S >= need) return {2, "T2", Rational(1, 2)};
  if (S / 2 >= need) {
    if (2 * N > S) return {3, "T3-A", Rational(1, 2)};
    if (2 * N < S) return {3, "T3-B", Rational(N, S)};
    return {3, "T3-C", Rational(2 * N - 1, 2 * S)};
  }
  throw UnsupportedConfiguration("no scheme covers S=" + std::to_string(S) + ", N=" +
                                 std::to_string(N) + ", L_T=" + std::to_string(cfg.L_T));
}

Schedule scheme_theorem1(const Topology& topo) {
  const auto& cfg = linear_config(topo);
  if (cfg.L_T > 2) throw UnsupportedConfiguration("theorem-1 schemes need L_T <= 2");
  const auto desc = select_scheme(cfg);
  const int S = cfg.S, N = cfg.N;
  ReceivePattern odd(cfg.K_B), even(cfg.K_B);
  for (int i = 1; i <= cfg.K_B; ++i) {
    if (desc.case_label == "1A") {
      // Odd MBs take odd positions, even MBs even ones; swapped on even slots.
      const bool i_odd = i % 2 == 1;
      odd[i - 1] = positions(cfg, i, i_odd ? 1 : 2, S, 2);
      even[i - 1] = positions(cfg, i, i_odd ? 2 : 1, S, 2);
    } else if (desc.case_label == "1B") {
      odd[i - 1] = positions(cfg, i, 1, S, 2);
      even[i - 1] = positions(cfg, i, 2, S, 2);
    } else if (desc.case_label == "2") {
      const bool i_odd = i % 2 == 1;
      const auto a = positions(cfg, i, 3, 2 * N + 1, 2);
      const auto b = positions(cfg, i, 2, 2 * N, 2);
      odd[i - 1] = i_odd ? a : b;
      even[i - 1] = i_odd ? b : a;
    } else {  // "3"
      odd[i - 1] = positions(cfg, i, 3, S, 2);
      even[i - 1] = positions(cfg, i, 2, S, 2);
    }
  }
  return pipeline(topo, desc, odd, even, PayloadKind::raw_message);
}

Schedule scheme_theorem2(const Topology& topo) {
  const auto& cfg = linear_config(topo);
  if (!(cfg.N >= cfg.S && cfg.S >= ceil_half(cfg.L_T))) {
    throw UnsupportedConfiguration("theorem-2 scheme needs N >= S and S >= ceil(L_T/2)");
  }
  ReceivePattern odd(cfg.K_B), even(cfg.K_B);
  for (int i = 1; i <= cfg.K_B; ++i) {
    (i % 2 == 1 ? odd : even)[i - 1] = positions(cfg, i, 1, cfg.S);
  }
  return pipeline(topo, {2, "T2", Rational(1, 2)}, odd, even, PayloadKind::group_combination);
}

Schedule scheme_theorem3(const Topology& topo) {
  const auto& cfg = linear_config(topo);
  const int S = cfg.S, N = cfg.N;
  if (!(S / 2 >= ceil_half(cfg.L_T))) {
    throw UnsupportedConfiguration("theorem-3 schemes need floor(S/2) >= ceil(L_T/2)");
  }
  SchemeDescriptor desc;
  desc.theorem = 3;
  ReceivePattern odd(cfg.K_B), even(cfg.K_B);
  for (int i = 1; i <= cfg.K_B; ++i) {
    if (2 * N > S) {
      desc.case_label = "T3-A";
      desc.predicted = Rational(1, 2);
      odd[i - 1] = positions(cfg, i, 1, S / 2);
      even[i - 1] = positions(cfg, i, S / 2 + 1, S);
    } else if (2 * N < S) {
      desc.case_label = "T3-B";
      desc.predicted = Rational(N, S);
      odd[i - 1] = positions(cfg, i, 2, N + 1);
      even[i - 1] = positions(cfg, i, ceil_half(S) + 1, ceil_half(S) + N);
    } else {
      desc.case_label = "T3-C";
      desc.predicted = Rational(2 * N - 1, 2 * S);
      odd[i - 1] = positions(cfg, i, 2, S / 2);
      even[i - 1] = positions(cfg, i, S / 2 + 1, S);
    }
  }
  return pipeline(topo, desc, odd, even, PayloadKind::group_combination);
}

Schedule scheme_hexagonal(const Topology& topo) {
  if (topo.kind != TopologyKind::hexagonal || !topo.hex) {
    throw UnsupportedConfiguration("hexagonal scheme requires a hexagonal topology");
  }
  if (topo.N < 13) {
    throw UnsupportedConfiguration("hexagonal scheme needs N >= 13, got " + std::to_string(topo.N));
  }
  const auto& hex = *topo.hex;
  ReceivePattern odd(hex.block_count()), even(hex.block_count());
  for (int r = 1; r <= hex.rows(); ++r) {
    for (int c = 1; c <= hex.cols(); ++c) {
      const int mb = hex.mb_of_block(r, c);
      for (int p : kHexClassA) odd[mb - 1].push_back(hex.node_of(r, c, p));
      for (int p : kHexClassB) even[mb - 1].push_back(hex.node_of(r, c, p));
    }
  }
  return pipeline(topo, {4, "HEX", Rational(1, 2)}, odd, even, PayloadKind::raw_message);
}

Schedule generate_schedule(const Topology& topo) {
  if (topo.kind == TopologyKind::hexagonal) return scheme_hexagonal(topo);
  const auto desc = select_scheme(*topo.config);
  switch (desc.theorem) {
    case 1: return scheme_theorem1(topo);
    case 2: return scheme_theorem2(topo);
    default: return scheme_theorem3(topo);
  }
}

}  // namespace hetdof

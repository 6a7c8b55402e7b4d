#include "hetdof/errors.hpp"
#include "hetdof/simulator.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace hetdof {

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::half_duplex: return "half-duplex";
    case ViolationKind::causality: return "causality";
    case ViolationKind::nulling: return "nulling";
    case ViolationKind::antenna: return "antenna";
    case ViolationKind::separation: return "separation";
  }
  return "unknown";
}

ViolationKind parse_violation_kind(const std::string& text) {
  for (auto k : {ViolationKind::half_duplex, ViolationKind::causality, ViolationKind::nulling,
                 ViolationKind::antenna, ViolationKind::separation}) {
    if (to_string(k) == text) return k;
  }
  throw InputError("unknown violation kind '" + text + "'");
}

namespace {

void check_index(int v, int hi, const char* what, int slot) {
  if (v < 1 || v > hi) {
    throw InputError(std::string(what) + " " + std::to_string(v) + " in slot " +
                     std::to_string(slot) + " is outside the network");
  }
}

}  // namespace

std::vector<Violation> audit_schedule(const Schedule& sched, const Topology& topo, int horizon) {
  if (horizon <= 0) {
    horizon = sched.cyclic ? sched.warmup + 2 * sched.period : static_cast<int>(sched.slots.size());
  }
  std::vector<Violation> out;
  auto flag = [&](ViolationKind k, int slot, int node, std::string detail) {
    out.push_back({k, slot, node, std::move(detail)});
  };
  const int K = topo.K;
  std::map<int, std::deque<std::pair<Content, int>>> buffers;

  for (int t = 1; t <= horizon; ++t) {
    const SlotPlan& slot = sched.at(t);

    // Index validation up front so later checks can trust the numbers.
    for (const auto& b : slot.backhaul) {
      check_index(b.mb, topo.mb_count(), "MB", t);
      for (const auto& d : b.targets) check_index(d.sb, K, "SB", t);
      for (int z : b.nulls) check_index(z, K, "SB", t);
    }
    for (const auto& g : slot.transmission) {
      for (int sb : g.sbs) check_index(sb, K, "SB", t);
      for (int mt : g.mts) check_index(mt, K, "MT", t);
    }

    std::map<int, int> receiver_mb;
    for (const auto& b : slot.backhaul) {
      for (const auto& d : b.targets) {
        if (!receiver_mb.emplace(d.sb, b.mb).second) {
          flag(ViolationKind::nulling, t, d.sb, "SB targeted by more than one MB");
        }
      }
    }
    std::vector<int> receiving;
    for (const auto& [sb, mb] : receiver_mb) receiving.push_back(sb);

    std::map<int, int> sb_group;
    for (const auto& g : slot.transmission) {
      for (int sb : g.sbs) {
        if (!sb_group.emplace(sb, g.id).second) {
          flag(ViolationKind::separation, t, sb, "SB transmits in two groups");
        }
      }
    }

    for (const auto& [sb, gid] : sb_group) {
      if (receiver_mb.count(sb)) {
        flag(ViolationKind::half_duplex, t, sb, "SB receives and transmits in the same slot");
      }
    }

    for (const auto& b : slot.backhaul) {
      if (b.antennas_used() > topo.N) {
        flag(ViolationKind::antenna, t, b.mb,
             std::to_string(b.antennas_used()) + " constraints exceed N = " + std::to_string(topo.N));
      }
      for (const auto& d : b.targets) {
        if (!topo.backhaul.in_footprint(b.mb, d.sb)) {
          flag(ViolationKind::antenna, t, b.mb, "target SB " + std::to_string(d.sb) + " outside footprint");
        }
      }
      for (int z : b.nulls) {
        if (!topo.backhaul.in_footprint(b.mb, z)) {
          flag(ViolationKind::antenna, t, b.mb, "null SB " + std::to_string(z) + " outside footprint");
        }
      }
      if (b.targets.empty()) continue;
      const auto own = b.target_sbs();
      for (int sb : receiving) {
        if (!topo.backhaul.in_footprint(b.mb, sb)) continue;
        if (std::find(own.begin(), own.end(), sb) != own.end()) continue;
        if (std::find(b.nulls.begin(), b.nulls.end(), sb) == b.nulls.end()) {
          flag(ViolationKind::nulling, t, sb,
               "MB " + std::to_string(b.mb) + " does not null at receiving SB");
        }
      }
    }

    for (const auto& g : slot.transmission) {
      const bool shape_ok = !g.sbs.empty() && g.sbs.size() == g.mts.size() &&
                            (g.kind == PayloadKind::group_combination || g.sbs.size() == 1);
      if (!shape_ok || !structurally_invertible(topo.transmission, g.sbs, g.mts)) {
        flag(ViolationKind::separation, t, g.sbs.empty() ? 0 : g.sbs.front(),
             "group " + std::to_string(g.id) + " cannot serve its MTs");
      }
      for (int mt : g.mts) {
        for (int sb : topo.transmission.heard_by(mt)) {
          auto it = sb_group.find(sb);
          if (it != sb_group.end() &&
              std::find(g.sbs.begin(), g.sbs.end(), sb) == g.sbs.end()) {
            flag(ViolationKind::separation, t, mt,
                 "served MT hears SB " + std::to_string(sb) + " of another group");
          }
        }
      }
    }

    // Causality: transmissions consume content received in earlier slots.
    for (const auto& g : slot.transmission) {
      for (std::size_t k = 0; k < g.sbs.size(); ++k) {
        const int sb = g.sbs[k];
        const Content need = g.kind == PayloadKind::raw_message
                                 ? Content{g.kind, k < g.mts.size() ? g.mts[k] : 0}
                                 : Content{g.kind, g.id};
        auto& buf = buffers[sb];
        auto it = std::find_if(buf.begin(), buf.end(), [&](const auto& e) {
          return e.first == need && e.second < t;
        });
        if (it == buf.end()) {
          flag(ViolationKind::causality, t, sb, "transmits content it never received");
        } else {
          buf.erase(it);
        }
      }
    }
    for (const auto& b : slot.backhaul) {
      for (const auto& d : b.targets) {
        if (d.content.kind == PayloadKind::group_combination) {
          const int when = sched.next_group_slot(d.content.ref, t);
          const TransmissionGroup* g = when ? sched.at(when).find_group(d.content.ref) : nullptr;
          if (g == nullptr || std::find(g->sbs.begin(), g->sbs.end(), d.sb) == g->sbs.end()) {
            if (when != 0 || t < horizon) {
              flag(ViolationKind::causality, t, d.sb,
                   "combination for group " + std::to_string(d.content.ref) +
                       " that does not use this SB");
            }
          }
        }
        buffers[d.sb].emplace_back(d.content, t);
      }
    }
  }
  return out;
}

}  // namespace hetdof

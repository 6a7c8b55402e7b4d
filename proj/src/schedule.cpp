#include "hetdof/schedule.hpp"

#include "hetdof/errors.hpp"

#include <algorithm>
#include <set>

namespace hetdof {

std::vector<int> BackhaulPlan::target_sbs() const {
  std::vector<int> out;
  for (const auto& d : targets) out.push_back(d.sb);
  return out;
}

std::vector<int> SlotPlan::receiving_sbs() const {
  std::set<int> out;
  for (const auto& b : backhaul) {
    for (const auto& d : b.targets) out.insert(d.sb);
  }
  return {out.begin(), out.end()};
}

std::vector<int> SlotPlan::transmitting_sbs() const {
  std::set<int> out;
  for (const auto& g : transmission) out.insert(g.sbs.begin(), g.sbs.end());
  return {out.begin(), out.end()};
}

std::vector<int> SlotPlan::served_mts() const {
  std::set<int> out;
  for (const auto& g : transmission) out.insert(g.mts.begin(), g.mts.end());
  return {out.begin(), out.end()};
}

const TransmissionGroup* SlotPlan::find_group(int id) const {
  for (const auto& g : transmission) {
    if (g.id == id) return &g;
  }
  return nullptr;
}

const BackhaulPlan* SlotPlan::find_mb(int mb) const {
  for (const auto& b : backhaul) {
    if (b.mb == mb) return &b;
  }
  return nullptr;
}

const SlotPlan& Schedule::at(int t) const {
  static const SlotPlan empty;
  if (t < 1) throw InputError("slot index must be positive");
  const auto n = static_cast<int>(slots.size());
  if (t <= n) return slots[t - 1];
  if (!cyclic || period <= 0) return empty;
  if (n != warmup + period) {
    throw InputError("cyclic schedule must hold exactly warmup + period slots");
  }
  return slots[warmup + (t - warmup - 1) % period];
}

int Schedule::next_group_slot(int id, int after) const {
  const int horizon = static_cast<int>(slots.size()) + (cyclic ? period : 0);
  for (int t = after + 1; t <= after + horizon; ++t) {
    if (at(t).find_group(id) != nullptr) return t;
  }
  return 0;
}

std::vector<Subsystem> schedule_subsystems(const Schedule& sched) {
  std::vector<Subsystem> out;
  for (const auto& slot : sched.slots) {
    for (const auto& b : slot.backhaul) {
      if (b.targets.empty()) continue;
      BackhaulSubsystem sub{b.mb, b.target_sbs()};
      sub.sbs.insert(sub.sbs.end(), b.nulls.begin(), b.nulls.end());
      out.emplace_back(std::move(sub));
    }
    for (const auto& g : slot.transmission) {
      out.emplace_back(GroupSubsystem{g.sbs, g.mts});
    }
  }
  return out;
}

std::vector<int> service_counts(const Schedule& sched, int K) {
  std::vector<int> counts(K, 0);
  const int first = sched.warmup + 1;
  const int last = sched.cyclic ? sched.warmup + sched.period : static_cast<int>(sched.slots.size());
  for (int t = first; t <= last; ++t) {
    for (int mt : sched.at(t).served_mts()) {
      if (mt < 1 || mt > K) throw InputError("served MT outside the network");
      ++counts[mt - 1];
    }
  }
  return counts;
}

}  // namespace hetdof

#pragma once

// Schedule IR shared by the scheme generators, the oracle, the auditor and
// the simulator.
//
// Slot t (1-based) carries a backhaul plan per transmitting MB and a list of
// transmission groups. Content delivered to an SB in slot s is buffered and
// may be transmitted in any later slot. Raw content is the message of one MT;
// combination content is the SB's share of a group's precoded messages, where
// the group is the first group with that id in a slot after s.

#include "hetdof/channel.hpp"
#include "hetdof/rational.hpp"
#include "hetdof/topology.hpp"

#include <string>
#include <vector>

namespace hetdof {

enum class PayloadKind { raw_message, group_combination };

struct Content {
  PayloadKind kind = PayloadKind::raw_message;
  int ref = 0;  ///< MT index for raw content, group id for combinations

  friend bool operator==(const Content&, const Content&) = default;
  friend auto operator<=>(const Content&, const Content&) = default;
};

struct Delivery {
  int sb = 0;
  Content content;
};

struct BackhaulPlan {
  int mb = 0;
  std::vector<Delivery> targets;
  std::vector<int> nulls;

  std::vector<int> target_sbs() const;
  int antennas_used() const { return static_cast<int>(targets.size() + nulls.size()); }
};

struct TransmissionGroup {
  int id = 0;
  PayloadKind kind = PayloadKind::raw_message;
  std::vector<int> sbs;
  std::vector<int> mts;  ///< served MTs; same length as sbs
};

struct SlotPlan {
  std::vector<BackhaulPlan> backhaul;
  std::vector<TransmissionGroup> transmission;
  std::vector<int> deactivated;  ///< pairs silent in the transmission layer

  std::vector<int> receiving_sbs() const;
  std::vector<int> transmitting_sbs() const;
  std::vector<int> served_mts() const;
  const TransmissionGroup* find_group(int id) const;
  const BackhaulPlan* find_mb(int mb) const;
};

struct SchemeDescriptor {
  int theorem = 0;         ///< 1..4; 0 for schedules not produced by a theorem
  std::string case_label;  ///< "1A", "1B", "2", "3", "T2", "T3-A", "T3-B", "T3-C", "HEX"
  Rational predicted{0};   ///< asymptotic per-user DoF
};

/// When `cyclic`, slots[0..warmup) run once and slots[warmup..warmup+period)
/// repeat forever; otherwise slots past the end are empty.
struct Schedule {
  SchemeDescriptor scheme;
  std::vector<SlotPlan> slots;
  int warmup = 1;
  int period = 2;
  bool cyclic = true;

  const SlotPlan& at(int t) const;
  /// First slot after `after` whose transmission contains group `id`, or 0.
  int next_group_slot(int id, int after) const;
};

/// Every backhaul and group system a schedule asks the channels to invert,
/// over one warm-up plus one period.
std::vector<Subsystem> schedule_subsystems(const Schedule& sched);

/// Number of deliveries to each MT over one steady-state period (index mt-1),
/// counted structurally from the transmission groups.
std::vector<int> service_counts(const Schedule& sched, int K);

}  // namespace hetdof

#pragma once

#include "hetdof/channel.hpp"
#include "hetdof/rational.hpp"
#include "hetdof/schedule.hpp"
#include "hetdof/topology.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hetdof {

/// Relative tolerance for counting a sample as exactly the intended symbol.
inline constexpr double kDeliveryTolerance = 1e-9;

enum class ViolationKind { half_duplex, causality, nulling, antenna, separation };

std::string to_string(ViolationKind kind);
ViolationKind parse_violation_kind(const std::string& text);

struct Violation {
  ViolationKind kind = ViolationKind::nulling;
  int slot = 0;
  int node = 0;  ///< SB, MT or MB depending on the kind; 0 when not applicable
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Channel-free structural checks over slots 1..horizon (default: warm-up
/// plus two periods, or all slots of a non-cyclic schedule): half-duplex
/// roles, buffer causality, antenna counts and footprints, required nulls,
/// and that every served MT hears only SBs of its own group.
/// Throws InputError for nodes outside the network.
std::vector<Violation> audit_schedule(const Schedule& sched, const Topology& topo,
                                      int horizon = 0);

struct DeliveryRecord {
  int mt = 0;
  int slot = 0;
  cd intended;
  cd received;
  double residual = 0.0;      ///< |received - intended| / (1 + |intended|)
  double interference = 0.0;  ///< sample with the own message removed, same scale
};

struct SimulationReport {
  int K = 0;
  int T = 0;
  int warmup = 1;
  int period = 2;
  std::vector<DeliveryRecord> delivered;
  std::vector<Violation> violations;
  std::vector<int> per_slot_deliveries;  ///< index t-1
  Rational pudof_finite{0};
  Rational pudof_asymptotic{0};
  bool asymptotic_defined = false;
  double max_residual = 0.0;           ///< over backhaul receptions and deliveries
  double max_interference = 0.0;       ///< over delivered MTs
  double max_backhaul_leakage = 0.0;   ///< other MBs' contribution at receiving SBs

  int deliveries() const { return static_cast<int>(delivered.size()); }
};

/// Unit-modulus 8-PSK symbol of message (mt, slot), fixed by the seed.
cd message_symbol(std::uint64_t seed, int mt, int slot);

/// Channel in force during slot t.
using ChannelProvider = std::function<const ChannelRealization&(int slot)>;

struct RunOptions {
  std::uint64_t message_seed = 0;
  double tolerance = kDeliveryTolerance;
};

/// Executes `sched` for T slots. Structural problems found along the way and
/// samples failing the tolerance are recorded as violations, not thrown.
/// Throws InputError for schedules naming nodes outside the topology.
SimulationReport run(const Schedule& sched, const Topology& topo, const ChannelProvider& channels,
                     int T, const RunOptions& options = {});
SimulationReport run(const Schedule& sched, const Topology& topo, const ChannelRealization& ch,
                     int T, const RunOptions& options = {});

/// (deliveries / (K T), deliveries over the last full period / (K period)).
/// Throws InputError when T < warmup + period.
std::pair<Rational, Rational> measure_pudof(const SimulationReport& report);

/// Deliveries per MT (index mt-1) over slots [first, last].
std::vector<int> delivery_counts(const SimulationReport& report, int first, int last);

}  // namespace hetdof

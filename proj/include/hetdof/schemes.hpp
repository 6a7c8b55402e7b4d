#pragma once

// Achievability schemes as pipelined period-2 schedules.
//
// Slot 1 is warm-up (backhaul only). From slot 2 on, every slot's SB
// transmissions carry what was delivered in the previous slot while the
// complementary SBs receive. Null sets are never hardcoded: each MB nulls at
// the concurrently receiving SBs of its footprint outside its own cluster.

#include "hetdof/schedule.hpp"
#include "hetdof/topology.hpp"

namespace hetdof {

/// Case selection and predicted per-user DoF for the linear network.
/// Throws UnsupportedConfiguration when no scheme's precondition holds.
SchemeDescriptor select_scheme(const NetworkConfig& cfg);

/// L_T <= 2: interference avoidance with raw messages (cases 1A, 1B, 2, 3).
Schedule scheme_theorem1(const Topology& topo);
/// N >= S and S >= ceil(L_T/2): whole clusters receive combinations on alternate slots.
Schedule scheme_theorem2(const Topology& topo);
/// floor(S/2) >= ceil(L_T/2): half-cluster groups of combinations (cases A, B, C).
Schedule scheme_theorem3(const Topology& topo);
/// N >= 13: class-A positions {1,4,7,8,9} and class-B {2,3,5,6} alternate.
Schedule scheme_hexagonal(const Topology& topo);

/// Dispatches on the topology kind and select_scheme.
Schedule generate_schedule(const Topology& topo);

/// Re-plans which MTs the transmitting SBs serve, over as many copies of the
/// period as needed, so every MT is served equally often across the
/// super-period. The backhaul receive pattern (hence antenna use and
/// half-duplex roles) and the per-slot delivery count are unchanged; served
/// MTs may move to a neighbouring SB, in which case content switches to group
/// combinations. Returns the input when service is already equal.
/// Throws UnsupportedConfiguration when no equal-service assignment exists.
Schedule apply_fairness_rotation(const Schedule& sched, const Topology& topo);

}  // namespace hetdof

#pragma once

// Converse bounds and an exhaustive small-instance oracle.

#include "hetdof/rational.hpp"
#include "hetdof/schedule.hpp"
#include "hetdof/simulator.hpp"
#include "hetdof/topology.hpp"

#include <algorithm>
#include <string>

namespace hetdof {

struct BoundSet {
  Rational asymptotic{0};     ///< min(N/S, 1/2)
  Rational half_duplex_T{0};  ///< (T-1)/(2T)
  Rational antenna_T{0};      ///< ceil(K/S) (T-1) N / (K T)

  Rational finite() const { return std::min(half_duplex_T, antenna_T); }
};

/// Throws InputError unless T >= 1 and K, S, N >= 1.
BoundSet converse_bounds(int K, int S, int N, int T);
BoundSet converse_bounds(const NetworkConfig& cfg, int T);

struct BoundCheck {
  bool ok = false;     ///< finite <= both finite-T bounds and asymptotic <= min(N/S, 1/2)
  bool tight = false;  ///< asymptotic puDoF equals the asymptotic bound
};

/// The asymptotic comparison is skipped when the report has no asymptotic value.
BoundCheck check_scheme_against_bounds(const SimulationReport& report, const BoundSet& bounds);

enum class OracleMode { raw, combinations };

std::string to_string(OracleMode mode);
OracleMode parse_oracle_mode(const std::string& text);

struct OracleResult {
  int max_deliveries = 0;
  Schedule witness;  ///< non-cyclic, T slots, replayable through run()
};

inline constexpr int kOracleMaxK = 8;
inline constexpr int kOracleMaxT = 4;

/// Exhaustive search over zero-forcing schedules of T slots on a linear
/// network. Raw mode: SB j only ever carries MT j's messages and the
/// transmitting SBs must not disturb each other's MTs. Combinations mode:
/// transmitting SBs need a matching onto distinct MTs that hear only them
/// jointly (group zero-forcing).
/// Throws SearchTooLarge when K > kOracleMaxK or T > kOracleMaxT.
OracleResult brute_force_max_delivery(const NetworkConfig& cfg, int T, OracleMode mode);

}  // namespace hetdof

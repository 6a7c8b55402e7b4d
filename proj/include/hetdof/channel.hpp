#pragma once

#include "hetdof/topology.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hetdof {

using cd = std::complex<double>;

/// Realizations whose zero-forcing systems are worse conditioned than this
/// are treated as non-generic and resampled.
inline constexpr double kGenericityThreshold = 1e8;

/// Every nonzero channel coefficient of both layers.
struct ChannelRealization {
  std::uint64_t seed = 0;
  int antennas = 0;
  /// (mb, sb) -> length-N vector, present iff sb lies in the MB's footprint.
  std::map<std::pair<int, int>, Eigen::VectorXcd> backhaul;
  /// (sb, mt) -> gain, present iff MT mt hears SB sb.
  std::map<std::pair<int, int>, cd> transmission;

  /// Throws InputError when (mb, sb) is outside the backhaul support.
  const Eigen::VectorXcd& backhaul_vector(int mb, int sb) const;
  bool reaches(int mb, int sb) const { return backhaul.count({mb, sb}) != 0; }
  /// Zero outside the transmission support.
  cd gain(int sb, int mt) const;
};

/// Deterministic i.i.d. CN(0,1) sampling over the topology's support.
ChannelRealization sample_channels(const Topology& topo, std::uint64_t seed);

/// A backhaul system: the channel vectors from `mb` to `sbs` (targets then nulls).
struct BackhaulSubsystem {
  int mb = 0;
  std::vector<int> sbs;
};

/// A transmission-layer group matrix (rows = MTs, columns = SBs).
struct GroupSubsystem {
  std::vector<int> sbs;
  std::vector<int> mts;
};

using Subsystem = std::variant<BackhaulSubsystem, GroupSubsystem>;

struct GenericityReport {
  bool generic = true;
  double worst_condition = 1.0;
  std::string worst_subsystem;
};

/// Condition number (largest over smallest singular value) of a matrix;
/// infinity when rank deficient.
double condition_number(const Eigen::MatrixXcd& m);

/// True iff every listed system has full rank with condition number at most
/// kGenericityThreshold. Throws InfeasibleShape when a backhaul system has
/// more columns than the MB has antennas.
GenericityReport certify_generic(const ChannelRealization& ch,
                                 std::span<const Subsystem> subsystems);

struct GenericSample {
  ChannelRealization channels;
  int resample_offset = 0;  ///< the accepted realization used seed + offset
  GenericityReport report;
};

/// Samples with seed, seed+1, ... until certify_generic accepts.
GenericSample sample_generic_channels(const Topology& topo, std::uint64_t seed,
                                      std::span<const Subsystem> subsystems,
                                      int max_attempts = 64);

}  // namespace hetdof

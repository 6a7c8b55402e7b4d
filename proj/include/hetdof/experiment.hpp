#pragma once

// Batch experiments: sweeps x seeds through scheme generation, simulation
// and bound checks, or through the exhaustive oracle.

#include "hetdof/bounds.hpp"
#include "hetdof/serialization.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace hetdof {

/// Process exit codes shared by every subcommand.
inline constexpr int kExitClean = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInputError = 2;

enum class ExperimentMode { simulate, oracle };

struct ExperimentSpec {
  std::string name;
  Json topology;                 ///< a topology document without schema_version
  std::string scheme = "auto";   ///< "auto" or a case label such as "1A" or "T3-B"
  std::vector<std::uint64_t> seeds{1};
  int T = 21;
  /// Axis name ("N", "S", "L_T", "L_B") -> values, overriding the topology.
  std::map<std::string, std::vector<int>> sweep;
  int max_points = 10000;        ///< cap on points x seeds
  bool fairness = false;
  bool resample_per_slot = false;
  ExperimentMode mode = ExperimentMode::simulate;
  OracleMode oracle_mode = OracleMode::raw;
  std::filesystem::path out_dir = "results";
  int workers = 0;               ///< 0: hardware concurrency
};

/// Throws InputError naming the offending field.
ExperimentSpec parse_experiment_spec(const Json& doc);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct ExperimentResult {
  std::vector<SummaryRow> rows;
  int exit_code = kExitClean;
};

/// Writes summary.csv and runs/run-NNNN.{report,schedule,topology}.json under
/// spec.out_dir. Rows are ordered by sweep point, then seed, independent of
/// the worker count. Unsupported points become rows, not errors.
ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream& log);

struct VerifyOptions {
  std::uint64_t seed = 1;
  int T = 21;
  bool resample_per_slot = false;
};

/// Audits and simulates a schedule document against a topology document;
/// prints violations and puDoF to `out`. Returns kExitClean iff clean.
int verify_command(const std::filesystem::path& schedule_path,
                   const std::filesystem::path& topology_path, const VerifyOptions& options,
                   std::ostream& out);

}  // namespace hetdof

#pragma once

// JSON documents (topology, schedule, report) and the CSV summary row.
// Every document carries "schema_version"; readers reject other versions.

#include "hetdof/bounds.hpp"
#include "hetdof/schedule.hpp"
#include "hetdof/simulator.hpp"
#include "hetdof/topology.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace hetdof {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json topology_to_json(const Topology& topo);
Topology topology_from_json(const Json& doc);

Json schedule_to_json(const Schedule& sched);
Schedule schedule_from_json(const Json& doc);

Json report_to_json(const SimulationReport& report);

/// Parses a file; syntax errors become InputError with line and column.
Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& doc);

/// One row of the summary table.
struct SummaryRow {
  int K = 0;
  int S = 0;
  int N = 0;
  int L_T = 0;
  int L_B = 0;
  std::string scheme;  ///< case label, or empty when unsupported
  std::uint64_t seed = 0;
  int T = 0;
  int deliveries = 0;
  Rational pudof_finite{0};
  std::optional<Rational> pudof_asymptotic;
  Rational predicted{0};
  double max_residual = 0.0;
  int violations = 0;
  bool bounds_ok = false;
  std::string status;  ///< "ok", "violations", "bound-breach", "unsupported", "error"
};

std::string summary_csv_header();
std::string summary_csv_row(const SummaryRow& row);

}  // namespace hetdof

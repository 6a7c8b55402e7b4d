// Command-line front end: run, verify, bounds, oracle.

#include "hetdof/bounds.hpp"
#include "hetdof/errors.hpp"
#include "hetdof/experiment.hpp"
#include "hetdof/serialization.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace hetdof;

int main(int argc, char** argv) {
  CLI::App app{"Two-layer heterogeneous network DoF simulator"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run an experiment spec");
  std::string spec_path;
  std::vector<std::uint64_t> seed_list;
  int T_override = 0;
  std::string out_dir;
  int workers = -1;
  bool resample = false, fairness = false;
  run_cmd->add_option("spec", spec_path, "Experiment spec (JSON)")->required();
  run_cmd->add_option("--seed-list", seed_list, "Override the spec's seeds")->delimiter(',');
  run_cmd->add_option("--T", T_override, "Override the horizon")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out-dir", out_dir, "Override the output directory");
  run_cmd->add_option("--workers", workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  run_cmd->add_flag("--resample-per-slot", resample, "Draw fresh channels every slot");
  run_cmd->add_flag("--fairness", fairness, "Apply the fairness rotation");

  auto* verify_cmd = app.add_subcommand("verify", "Audit and simulate a schedule document");
  std::string schedule_path, topology_path;
  VerifyOptions vopt;
  verify_cmd->add_option("schedule", schedule_path, "Schedule document")->required();
  verify_cmd->add_option("topology", topology_path, "Topology document")->required();
  verify_cmd->add_option("--seed", vopt.seed, "Channel and message seed");
  verify_cmd->add_option("--T", vopt.T, "Slots to simulate")->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--resample-per-slot", vopt.resample_per_slot, "Draw fresh channels every slot");

  auto* bounds_cmd = app.add_subcommand("bounds", "Print the converse bounds");
  int bK = 0, bS = 0, bN = 0, bT = 0;
  bounds_cmd->add_option("--K", bK, "SB-MT pairs")->required();
  bounds_cmd->add_option("--S", bS, "Cluster size")->required();
  bounds_cmd->add_option("--N", bN, "MB antennas")->required();
  bounds_cmd->add_option("--T", bT, "Horizon")->required();

  auto* oracle_cmd = app.add_subcommand("oracle", "Exhaustive search on a small linear network");
  int oS = 0, oKB = 0, oN = 0, oLT = 0, oLB = 0, oT = 0;
  std::string mode_text = "raw", witness_path;
  oracle_cmd->add_option("--S", oS, "Cluster size")->required();
  oracle_cmd->add_option("--K_B", oKB, "Number of MBs")->required();
  oracle_cmd->add_option("--N", oN, "MB antennas")->required();
  oracle_cmd->add_option("--L_T", oLT, "Transmission-layer connectivity")->required();
  oracle_cmd->add_option("--L_B", oLB, "Backhaul-layer connectivity")->required();
  oracle_cmd->add_option("--T", oT, "Horizon")->required();
  oracle_cmd->add_option("--mode", mode_text, "raw or combinations");
  oracle_cmd->add_option("--witness", witness_path, "Write the witness schedule here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitInputError;
  }

  try {
    if (*run_cmd) {
      ExperimentSpec spec = load_experiment_spec(spec_path);
      if (!seed_list.empty()) spec.seeds = seed_list;
      if (T_override > 0) spec.T = T_override;
      if (!out_dir.empty()) spec.out_dir = out_dir;
      if (workers >= 0) spec.workers = workers;
      if (resample) spec.resample_per_slot = true;
      if (fairness) spec.fairness = true;
      const auto result = run_experiment(spec, std::cout);
      std::cout << "summary: " << (spec.out_dir / "summary.csv").string() << '\n';
      return result.exit_code;
    }
    if (*verify_cmd) {
      return verify_command(schedule_path, topology_path, vopt, std::cout);
    }
    if (*bounds_cmd) {
      const BoundSet b = converse_bounds(bK, bS, bN, bT);
      std::cout << "asymptotic " << to_string(b.asymptotic) << '\n'
                << "half_duplex_T " << to_string(b.half_duplex_T) << '\n'
                << "antenna_T " << to_string(b.antenna_T) << '\n';
      return kExitClean;
    }
    if (*oracle_cmd) {
      const NetworkConfig cfg = NetworkConfig::linear(oS, oKB, oN, oLT, oLB);
      const OracleResult r = brute_force_max_delivery(cfg, oT, parse_oracle_mode(mode_text));
      const BoundSet b = converse_bounds(cfg, oT);
      std::cout << "max_deliveries " << r.max_deliveries << '\n'
                << "counting_cap " << to_string(b.finite() * Rational(cfg.K) * Rational(oT)) << '\n';
      if (!witness_path.empty()) {
        write_json_file(witness_path, schedule_to_json(r.witness));
        std::cout << "witness " << witness_path << '\n';
      }
      return kExitClean;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const SearchTooLarge& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitClean;
}

#include "hetdof/experiment.hpp"

#include "hetdof/errors.hpp"
#include "hetdof/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace hetdof {

namespace {

const std::vector<std::string> kAxes = {"N", "S", "L_T", "L_B"};

/// Channels for each slot; one realization for the whole run unless resampling.
class SlotChannels {
public:
  SlotChannels(const Topology& topo, std::uint64_t seed, std::vector<Subsystem> subsystems,
               bool per_slot)
      : topo_(topo), seed_(seed), subsystems_(std::move(subsystems)), per_slot_(per_slot) {}

  const ChannelRealization& operator()(int t) {
    const int key = per_slot_ ? t : 0;
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      const std::uint64_t s = per_slot_ ? seed_ * 1000003ULL + static_cast<std::uint64_t>(t) : seed_;
      it = cache_.emplace(key, sample_generic_channels(topo_, s, subsystems_)).first;
      max_offset_ = std::max(max_offset_, it->second.resample_offset);
    }
    return it->second.channels;
  }

  ChannelProvider provider() {
    return [this](int t) -> const ChannelRealization& { return (*this)(t); };
  }

  int max_resample_offset() const { return max_offset_; }

private:
  const Topology& topo_;
  std::uint64_t seed_;
  std::vector<Subsystem> subsystems_;
  bool per_slot_;
  std::map<int, GenericSample> cache_;
  int max_offset_ = 0;
};

std::vector<std::uint64_t> parse_seeds(const Json& v) {
  if (!v.is_array() || v.empty()) throw InputError("field 'seeds': expected a non-empty array");
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number_unsigned() && !(v[k].is_number_integer() && v[k].get<long long>() >= 0)) {
      throw InputError("field 'seeds[" + std::to_string(k) + "]': expected a non-negative integer");
    }
    out.push_back(v[k].get<std::uint64_t>());
  }
  return out;
}

std::vector<int> parse_axis(const Json& v, const std::string& name) {
  const std::string at = "sweep." + name;
  std::vector<int> out;
  if (v.is_array()) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (!v[k].is_number_integer()) {
        throw InputError("field '" + at + "[" + std::to_string(k) + "]': expected an integer");
      }
      out.push_back(v[k].get<int>());
    }
  } else if (v.is_object() && v.contains("from") && v.contains("to")) {
    if (!v["from"].is_number_integer() || !v["to"].is_number_integer()) {
      throw InputError("field '" + at + "': from/to must be integers");
    }
    for (int x = v["from"].get<int>(); x <= v["to"].get<int>(); ++x) out.push_back(x);
  } else {
    throw InputError("field '" + at + "': expected an array or {\"from\", \"to\"}");
  }
  if (out.empty()) throw InputError("field '" + at + "': empty range");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Json> expand_points(const ExperimentSpec& spec) {
  std::vector<Json> points{spec.topology};
  for (const auto& axis : kAxes) {
    auto it = spec.sweep.find(axis);
    if (it == spec.sweep.end()) continue;
    std::vector<Json> next;
    for (const auto& p : points) {
      for (int v : it->second) {
        Json q = p;
        q[axis] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  for (auto& p : points) p["schema_version"] = kSchemaVersion;
  return points;
}

std::string point_label(const Json& p) {
  std::ostringstream os;
  if (p.value("kind", "") == "hexagonal") {
    os << "hex " << p.value("rows", 0) << "x" << p.value("cols", 0) << " N=" << p.value("N", 0);
  } else {
    os << "S=" << p.value("S", 0) << " N=" << p.value("N", 0) << " L_T=" << p.value("L_T", 0)
       << " L_B=" << p.value("L_B", 0);
  }
  return os.str();
}

struct RunArtifacts {
  SummaryRow row;
  Json report;
  Json schedule;
  Json topology;
  std::string note;
};

void fill_shape(SummaryRow& row, const Json& p) {
  const bool hex = p.value("kind", "") == "hexagonal";
  row.N = p.value("N", 0);
  if (hex) {
    row.S = 9;
    row.K = 9 * p.value("rows", 0) * p.value("cols", 0);
  } else {
    row.S = p.value("S", 0);
    row.K = p.contains("K") ? p.value("K", 0) : row.S * p.value("K_B", 0);
    row.L_T = p.value("L_T", 0);
    row.L_B = p.value("L_B", 0);
  }
}

Json bounds_json(const BoundSet& b, const BoundCheck& c) {
  return {{"asymptotic", to_string(b.asymptotic)},
          {"half_duplex_T", to_string(b.half_duplex_T)},
          {"antenna_T", to_string(b.antenna_T)},
          {"ok", c.ok},
          {"tight", c.tight}};
}

RunArtifacts simulate_point(const ExperimentSpec& spec, const Json& point, std::uint64_t seed) {
  RunArtifacts a;
  a.row.seed = seed;
  a.row.T = spec.T;
  fill_shape(a.row, point);
  a.topology = point;
  if (a.row.N < 1) {
    a.row.status = "unsupported";
    a.note = "N must be at least 1";
    return a;
  }
  Topology topo = topology_from_json(point);
  a.topology = topology_to_json(topo);
  Schedule sched;
  try {
    if (topo.kind == TopologyKind::linear && spec.scheme != "auto") {
      const auto chosen = select_scheme(*topo.config);
      if (chosen.case_label != spec.scheme) {
        throw UnsupportedConfiguration("case " + spec.scheme + " requested but the configuration selects " +
                                       chosen.case_label);
      }
    }
    sched = generate_schedule(topo);
    if (topo.kind == TopologyKind::hexagonal && spec.scheme != "auto" && spec.scheme != "HEX") {
      throw UnsupportedConfiguration("hexagonal networks only support case HEX");
    }
    if (spec.fairness) sched = apply_fairness_rotation(sched, topo);
  } catch (const UnsupportedConfiguration& e) {
    a.row.status = "unsupported";
    a.note = e.what();
    return a;
  }
  a.row.scheme = sched.scheme.case_label;
  a.row.predicted = sched.scheme.predicted;
  a.schedule = schedule_to_json(sched);

  SlotChannels channels(topo, seed, schedule_subsystems(sched), spec.resample_per_slot);
  const SimulationReport rep = run(sched, topo, channels.provider(), spec.T, RunOptions{seed});
  const BoundSet bounds = converse_bounds(topo.K, topo.cluster_size(), topo.N, spec.T);
  const BoundCheck check = check_scheme_against_bounds(rep, bounds);

  a.row.deliveries = rep.deliveries();
  a.row.pudof_finite = rep.pudof_finite;
  if (rep.asymptotic_defined) a.row.pudof_asymptotic = rep.pudof_asymptotic;
  a.row.max_residual = rep.max_residual;
  a.row.violations = static_cast<int>(rep.violations.size());
  a.row.bounds_ok = check.ok;
  a.row.status = !rep.violations.empty() ? "violations" : (check.ok ? "ok" : "bound-breach");
  a.report = report_to_json(rep);
  a.report["seed"] = seed;
  a.report["scheme"] = sched.scheme.case_label;
  a.report["predicted"] = to_string(sched.scheme.predicted);
  a.report["channel_resample_offset"] = channels.max_resample_offset();
  a.report["bounds"] = bounds_json(bounds, check);
  return a;
}

RunArtifacts oracle_point(const ExperimentSpec& spec, const Json& point, std::uint64_t seed) {
  RunArtifacts a;
  a.row.seed = seed;
  a.row.T = spec.T;
  fill_shape(a.row, point);
  a.topology = point;
  if (point.value("kind", "") != "linear") throw InputError("oracle mode needs a linear topology");
  if (a.row.N < 1) {
    a.row.status = "unsupported";
    a.note = "N must be at least 1";
    return a;
  }
  Topology topo = topology_from_json(point);
  a.topology = topology_to_json(topo);
  const OracleResult best = brute_force_max_delivery(*topo.config, spec.T, spec.oracle_mode);
  a.row.scheme = "ORACLE";
  a.schedule = schedule_to_json(best.witness);

  SlotChannels channels(topo, seed, schedule_subsystems(best.witness), false);
  const SimulationReport rep = run(best.witness, topo, channels.provider(), spec.T, RunOptions{seed});
  const BoundSet bounds = converse_bounds(*topo.config, spec.T);
  const Rational cap = bounds.finite() * Rational(topo.K) * Rational(spec.T);
  a.row.deliveries = best.max_deliveries;
  a.row.pudof_finite = Rational(best.max_deliveries, static_cast<std::int64_t>(topo.K) * spec.T);
  a.row.max_residual = rep.max_residual;
  a.row.violations = static_cast<int>(rep.violations.size());
  a.row.bounds_ok = Rational(best.max_deliveries) <= cap;
  if (!rep.violations.empty()) {
    a.row.status = "violations";
  } else if (rep.deliveries() != best.max_deliveries) {
    a.row.status = "mismatch";
  } else {
    a.row.status = a.row.bounds_ok ? "ok" : "bound-breach";
  }
  a.report = report_to_json(rep);
  a.report["seed"] = seed;
  a.report["scheme"] = "ORACLE";
  a.report["oracle_mode"] = to_string(spec.oracle_mode);
  a.report["oracle_max"] = best.max_deliveries;
  a.report["bounds"] = bounds_json(bounds, BoundCheck{a.row.bounds_ok, false});
  return a;
}

std::string run_name(std::size_t index) {
  std::ostringstream os;
  os << "run-" << std::setw(4) << std::setfill('0') << index + 1;
  return os.str();
}

}  // namespace

ExperimentSpec parse_experiment_spec(const Json& doc) {
  if (!doc.is_object()) throw InputError("experiment spec must be a JSON object");
  const std::set<std::string> known = {"schema_version", "name",    "topology", "scheme",
                                       "seeds",          "T",       "sweep",    "max_points",
                                       "fairness",       "resample_per_slot",   "mode",
                                       "oracle_mode",    "out_dir", "workers"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw InputError("field '" + key + "': unknown field");
  }
  if (!doc.contains("schema_version") || doc["schema_version"] != kSchemaVersion) {
    throw InputError("field 'schema_version': expected " + std::to_string(kSchemaVersion));
  }
  ExperimentSpec spec;
  auto integer = [&](const char* key, int lo) {
    const Json& v = doc[key];
    if (!v.is_number_integer() || v.get<long long>() < lo) {
      throw InputError(std::string("field '") + key + "': expected an integer >= " + std::to_string(lo));
    }
    return v.get<int>();
  };
  auto boolean = [&](const char* key) {
    if (!doc[key].is_boolean()) throw InputError(std::string("field '") + key + "': expected true or false");
    return doc[key].get<bool>();
  };
  auto text = [&](const char* key) {
    if (!doc[key].is_string()) throw InputError(std::string("field '") + key + "': expected a string");
    return doc[key].get<std::string>();
  };
  if (doc.contains("name")) spec.name = text("name");
  if (!doc.contains("topology") || !doc["topology"].is_object()) {
    throw InputError("field 'topology': expected an object");
  }
  spec.topology = doc["topology"];
  spec.topology.erase("schema_version");
  const std::string kind = spec.topology.value("kind", "");
  if (kind != "linear" && kind != "hexagonal") {
    throw InputError("field 'topology.kind': expected \"linear\" or \"hexagonal\"");
  }
  if (kind == "linear" && !spec.topology.contains("K_B")) spec.topology["K_B"] = 4;
  if (doc.contains("scheme")) spec.scheme = text("scheme");
  const std::set<std::string> labels = {"auto", "1A", "1B", "2", "3", "T2", "T3-A", "T3-B", "T3-C", "HEX"};
  if (!labels.count(spec.scheme)) throw InputError("field 'scheme': unknown case '" + spec.scheme + "'");
  if (doc.contains("seeds")) spec.seeds = parse_seeds(doc["seeds"]);
  if (doc.contains("T")) spec.T = integer("T", 1);
  if (doc.contains("sweep")) {
    if (!doc["sweep"].is_object()) throw InputError("field 'sweep': expected an object");
    for (const auto& [axis, values] : doc["sweep"].items()) {
      if (std::find(kAxes.begin(), kAxes.end(), axis) == kAxes.end()) {
        throw InputError("field 'sweep." + axis + "': unknown axis (N, S, L_T, L_B)");
      }
      if (kind == "hexagonal" && axis != "N") {
        throw InputError("field 'sweep." + axis + "': hexagonal networks only sweep N");
      }
      spec.sweep[axis] = parse_axis(values, axis);
    }
  }
  if (doc.contains("max_points")) spec.max_points = integer("max_points", 1);
  if (doc.contains("fairness")) spec.fairness = boolean("fairness");
  if (doc.contains("resample_per_slot")) spec.resample_per_slot = boolean("resample_per_slot");
  if (doc.contains("mode")) {
    const std::string m = text("mode");
    if (m == "simulate") {
      spec.mode = ExperimentMode::simulate;
    } else if (m == "oracle") {
      spec.mode = ExperimentMode::oracle;
    } else {
      throw InputError("field 'mode': expected \"simulate\" or \"oracle\"");
    }
  }
  if (doc.contains("oracle_mode")) {
    try {
      spec.oracle_mode = parse_oracle_mode(text("oracle_mode"));
    } catch (const InputError& e) {
      throw InputError(std::string("field 'oracle_mode': ") + e.what());
    }
  }
  if (doc.contains("out_dir")) spec.out_dir = text("out_dir");
  if (doc.contains("workers")) spec.workers = integer("workers", 0);
  if (spec.mode == ExperimentMode::oracle && kind != "linear") {
    throw InputError("field 'mode': oracle mode needs a linear topology");
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  return parse_experiment_spec(read_json_file(path));
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::ostream& log) {
  const auto points = expand_points(spec);
  const std::size_t total = points.size() * spec.seeds.size();
  if (total > static_cast<std::size_t>(spec.max_points)) {
    throw InputError("sweep has " + std::to_string(total) + " runs, above max_points = " +
                     std::to_string(spec.max_points));
  }
  std::error_code ec;
  std::filesystem::create_directories(spec.out_dir / "runs", ec);
  if (ec) throw InputError("cannot create '" + spec.out_dir.string() + "': " + ec.message());
  std::ofstream csv(spec.out_dir / "summary.csv", std::ios::binary);
  if (!csv) throw InputError("cannot write '" + (spec.out_dir / "summary.csv").string() + "'");

  std::vector<RunArtifacts> results(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const Json& point = points[k / spec.seeds.size()];
      const std::uint64_t seed = spec.seeds[k % spec.seeds.size()];
      try {
        results[k] = spec.mode == ExperimentMode::oracle ? oracle_point(spec, point, seed)
                                                         : simulate_point(spec, point, seed);
      } catch (const InputError&) {
        errors[k] = std::current_exception();
      } catch (const std::exception& e) {
        results[k].row.seed = seed;
        results[k].row.T = spec.T;
        fill_shape(results[k].row, point);
        results[k].row.status = "error";
        results[k].note = e.what();
      }
    }
  };
  const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t n_workers =
      std::min<std::size_t>(total, spec.workers > 0 ? static_cast<std::size_t>(spec.workers) : hw);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentResult out;
  csv << summary_csv_header() << '\n';
  bool any_ok = false, any_bad = false;
  for (std::size_t k = 0; k < total; ++k) {
    RunArtifacts& a = results[k];
    csv << summary_csv_row(a.row) << '\n';
    const std::string name = run_name(k);
    if (!a.report.is_null()) write_json_file(spec.out_dir / "runs" / (name + ".report.json"), a.report);
    if (!a.schedule.is_null()) write_json_file(spec.out_dir / "runs" / (name + ".schedule.json"), a.schedule);
    if (!a.topology.is_null()) write_json_file(spec.out_dir / "runs" / (name + ".topology.json"), a.topology);
    log << name << "  " << point_label(points[k / spec.seeds.size()]) << "  seed=" << a.row.seed << "  "
        << (a.row.scheme.empty() ? "-" : a.row.scheme) << "  " << a.row.status;
    if (a.row.status != "unsupported" && a.row.status != "error") {
      log << "  puDoF=" << to_string(a.row.pudof_finite);
      if (a.row.pudof_asymptotic) log << " (asymptotic " << to_string(*a.row.pudof_asymptotic) << ")";
    }
    if (!a.note.empty()) log << "  " << a.note;
    log << '\n';
    any_ok = any_ok || a.row.status == "ok";
    any_bad = any_bad || (a.row.status != "ok" && a.row.status != "unsupported");
    out.rows.push_back(a.row);
  }
  if (!csv) throw InputError("failed writing summary.csv");
  out.exit_code = any_bad || !any_ok ? kExitFailure : kExitClean;
  if (!any_ok) log << "no run completed cleanly\n";
  return out;
}

int verify_command(const std::filesystem::path& schedule_path,
                   const std::filesystem::path& topology_path, const VerifyOptions& options,
                   std::ostream& out) {
  const Schedule sched = schedule_from_json(read_json_file(schedule_path));
  const Topology topo = topology_from_json(read_json_file(topology_path));
  SlotChannels channels(topo, options.seed, schedule_subsystems(sched), options.resample_per_slot);
  const SimulationReport rep = run(sched, topo, channels.provider(), options.T, RunOptions{options.seed});
  for (const auto& v : rep.violations) {
    out << "violation " << to_string(v.kind) << " slot=" << v.slot << " node=" << v.node << "  "
        << v.detail << '\n';
  }
  out << "deliveries " << rep.deliveries() << '\n';
  out << "puDoF_finite " << to_string(rep.pudof_finite) << '\n';
  if (rep.asymptotic_defined) out << "puDoF_asymptotic " << to_string(rep.pudof_asymptotic) << '\n';
  out << "max_residual " << rep.max_residual << '\n';
  out << (rep.violations.empty() ? "clean" : "violations found") << '\n';
  return rep.violations.empty() ? kExitClean : kExitFailure;
}

}  // namespace hetdof

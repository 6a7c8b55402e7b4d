#include "hetdof/serialization.hpp"

#include "hetdof/errors.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace hetdof {

namespace {

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  throw InputError("field '" + path + "': " + what);
}

const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) bad_field(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad_field(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

int get_int(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = member(j, key, path);
  if (!v.is_number_integer()) bad_field(join(path, key), "expected an integer");
  return v.get<int>();
}

bool get_bool(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = member(j, key, path);
  if (!v.is_boolean()) bad_field(join(path, key), "expected true or false");
  return v.get<bool>();
}

std::string get_string(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = member(j, key, path);
  if (!v.is_string()) bad_field(join(path, key), "expected a string");
  return v.get<std::string>();
}

std::vector<int> get_ints(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = member(j, key, path);
  const std::string at = join(path, key);
  if (!v.is_array()) bad_field(at, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number_integer()) bad_field(at + "[" + std::to_string(k) + "]", "expected an integer");
    out.push_back(v[k].get<int>());
  }
  return out;
}

const Json& get_array(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = member(j, key, path);
  if (!v.is_array()) bad_field(join(path, key), "expected an array");
  return v;
}

void check_version(const Json& doc, const std::string& what) {
  const int v = get_int(doc, "schema_version", "");
  if (v != kSchemaVersion) {
    throw InputError(what + " document has schema_version " + std::to_string(v) + ", expected " +
                     std::to_string(kSchemaVersion));
  }
}

std::string kind_name(PayloadKind k) {
  return k == PayloadKind::raw_message ? "raw" : "combination";
}

PayloadKind parse_kind(const std::string& s, const std::string& path) {
  if (s == "raw") return PayloadKind::raw_message;
  if (s == "combination") return PayloadKind::group_combination;
  bad_field(path, "expected \"raw\" or \"combination\", got \"" + s + "\"");
}

Json complex_json(cd z) { return Json::array({z.real(), z.imag()}); }

std::string decimal(const Rational& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << to_double(r);
  return os.str();
}

std::string scientific(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

}  // namespace

Json topology_to_json(const Topology& topo) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  if (topo.kind == TopologyKind::linear) {
    const NetworkConfig& c = *topo.config;
    doc["kind"] = "linear";
    doc["K"] = c.K;
    doc["K_B"] = c.K_B;
    doc["S"] = c.S;
    doc["N"] = c.N;
    doc["L_T"] = c.L_T;
    doc["L_B"] = c.L_B;
  } else {
    doc["kind"] = "hexagonal";
    doc["rows"] = topo.hex->rows();
    doc["cols"] = topo.hex->cols();
    doc["N"] = topo.N;
    Json edges = Json::array();
    for (const auto& [a, b] : topo.edges) edges.push_back(Json::array({a, b}));
    doc["edges"] = std::move(edges);
  }
  return doc;
}

Topology topology_from_json(const Json& doc) {
  check_version(doc, "topology");
  const std::string kind = get_string(doc, "kind", "");
  if (kind == "linear") {
    const int S = get_int(doc, "S", "");
    const int K_B = get_int(doc, "K_B", "");
    NetworkConfig cfg(doc.contains("K") ? get_int(doc, "K", "") : S * K_B, K_B, S,
                      get_int(doc, "N", ""), get_int(doc, "L_T", ""), get_int(doc, "L_B", ""));
    return make_linear_topology(cfg);
  }
  if (kind == "hexagonal") {
    std::optional<std::vector<Edge>> edges;
    if (doc.contains("edges")) {
      const Json& arr = get_array(doc, "edges", "");
      edges.emplace();
      for (std::size_t k = 0; k < arr.size(); ++k) {
        const Json& e = arr[k];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
          bad_field("edges[" + std::to_string(k) + "]", "expected a pair of node indices");
        }
        edges->emplace_back(e[0].get<int>(), e[1].get<int>());
      }
    }
    return make_hexagonal_topology(get_int(doc, "rows", ""), get_int(doc, "cols", ""),
                                   get_int(doc, "N", ""), edges);
  }
  bad_field("kind", "expected \"linear\" or \"hexagonal\", got \"" + kind + "\"");
}

Json schedule_to_json(const Schedule& sched) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["scheme"] = {{"theorem", sched.scheme.theorem},
                   {"case", sched.scheme.case_label},
                   {"predicted", to_string(sched.scheme.predicted)}};
  doc["warmup"] = sched.warmup;
  doc["period"] = sched.period;
  doc["cyclic"] = sched.cyclic;
  Json slots = Json::array();
  for (const auto& s : sched.slots) {
    Json backhaul = Json::array();
    for (const auto& b : s.backhaul) {
      Json targets = Json::array();
      for (const auto& d : b.targets) {
        targets.push_back({{"sb", d.sb}, {"kind", kind_name(d.content.kind)}, {"ref", d.content.ref}});
      }
      backhaul.push_back({{"mb", b.mb}, {"targets", std::move(targets)}, {"nulls", b.nulls}});
    }
    Json groups = Json::array();
    for (const auto& g : s.transmission) {
      groups.push_back({{"id", g.id}, {"kind", kind_name(g.kind)}, {"sbs", g.sbs}, {"mts", g.mts}});
    }
    slots.push_back({{"backhaul", std::move(backhaul)},
                     {"transmission", std::move(groups)},
                     {"deactivated", s.deactivated}});
  }
  doc["slots"] = std::move(slots);
  return doc;
}

Schedule schedule_from_json(const Json& doc) {
  check_version(doc, "schedule");
  Schedule out;
  const Json& scheme = member(doc, "scheme", "");
  out.scheme.theorem = get_int(scheme, "theorem", "scheme");
  out.scheme.case_label = get_string(scheme, "case", "scheme");
  try {
    out.scheme.predicted = parse_rational(get_string(scheme, "predicted", "scheme"));
  } catch (const InputError& e) {
    bad_field("scheme.predicted", e.what());
  }
  out.warmup = get_int(doc, "warmup", "");
  out.period = get_int(doc, "period", "");
  out.cyclic = get_bool(doc, "cyclic", "");
  const Json& slots = get_array(doc, "slots", "");
  for (std::size_t t = 0; t < slots.size(); ++t) {
    const std::string sp = "slots[" + std::to_string(t) + "]";
    SlotPlan slot;
    const Json& backhaul = get_array(slots[t], "backhaul", sp);
    for (std::size_t k = 0; k < backhaul.size(); ++k) {
      const std::string bp = sp + ".backhaul[" + std::to_string(k) + "]";
      BackhaulPlan plan;
      plan.mb = get_int(backhaul[k], "mb", bp);
      const Json& targets = get_array(backhaul[k], "targets", bp);
      for (std::size_t m = 0; m < targets.size(); ++m) {
        const std::string tp = bp + ".targets[" + std::to_string(m) + "]";
        plan.targets.push_back({get_int(targets[m], "sb", tp),
                                Content{parse_kind(get_string(targets[m], "kind", tp), tp + ".kind"),
                                        get_int(targets[m], "ref", tp)}});
      }
      plan.nulls = get_ints(backhaul[k], "nulls", bp);
      slot.backhaul.push_back(std::move(plan));
    }
    const Json& groups = get_array(slots[t], "transmission", sp);
    for (std::size_t k = 0; k < groups.size(); ++k) {
      const std::string gp = sp + ".transmission[" + std::to_string(k) + "]";
      TransmissionGroup g;
      g.id = get_int(groups[k], "id", gp);
      g.kind = parse_kind(get_string(groups[k], "kind", gp), gp + ".kind");
      g.sbs = get_ints(groups[k], "sbs", gp);
      g.mts = get_ints(groups[k], "mts", gp);
      slot.transmission.push_back(std::move(g));
    }
    slot.deactivated = get_ints(slots[t], "deactivated", sp);
    out.slots.push_back(std::move(slot));
  }
  if (out.cyclic && static_cast<int>(out.slots.size()) != out.warmup + out.period) {
    bad_field("slots", "a cyclic schedule needs exactly warmup + period slots");
  }
  return out;
}

Json report_to_json(const SimulationReport& report) {
  Json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["K"] = report.K;
  doc["T"] = report.T;
  doc["warmup"] = report.warmup;
  doc["period"] = report.period;
  doc["deliveries"] = report.deliveries();
  doc["puDoF_finite"] = to_string(report.pudof_finite);
  doc["puDoF_asymptotic"] =
      report.asymptotic_defined ? Json(to_string(report.pudof_asymptotic)) : Json(nullptr);
  doc["max_residual"] = report.max_residual;
  doc["max_interference"] = report.max_interference;
  doc["max_backhaul_leakage"] = report.max_backhaul_leakage;
  doc["per_slot_deliveries"] = report.per_slot_deliveries;
  Json violations = Json::array();
  for (const auto& v : report.violations) {
    violations.push_back(
        {{"kind", to_string(v.kind)}, {"slot", v.slot}, {"node", v.node}, {"detail", v.detail}});
  }
  doc["violations"] = std::move(violations);
  Json delivered = Json::array();
  for (const auto& d : report.delivered) {
    delivered.push_back({{"mt", d.mt},
                         {"slot", d.slot},
                         {"intended", complex_json(d.intended)},
                         {"received", complex_json(d.received)},
                         {"residual", d.residual},
                         {"interference", d.interference}});
  }
  doc["delivered"] = std::move(delivered);
  return doc;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                     ": syntax error");
  }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

std::string summary_csv_header() {
  return "K,S,N,L_T,L_B,scheme,seed,T,deliveries,puDoF_finite,puDoF_finite_decimal,"
         "puDoF_asymptotic,puDoF_asymptotic_decimal,predicted,max_residual,violations,bounds_ok,status";
}

std::string summary_csv_row(const SummaryRow& r) {
  std::ostringstream os;
  os << r.K << ',' << r.S << ',' << r.N << ',' << r.L_T << ',' << r.L_B << ',' << r.scheme << ','
     << r.seed << ',' << r.T << ',' << r.deliveries << ',' << to_string(r.pudof_finite) << ','
     << decimal(r.pudof_finite) << ',';
  if (r.pudof_asymptotic) {
    os << to_string(*r.pudof_asymptotic) << ',' << decimal(*r.pudof_asymptotic) << ',';
  } else {
    os << ",,";
  }
  os << to_string(r.predicted) << ',' << scientific(r.max_residual) << ',' << r.violations << ','
     << (r.bounds_ok ? "true" : "false") << ',' << r.status;
  return os.str();
}

}  // namespace hetdof

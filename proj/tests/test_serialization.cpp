#include "doctest.h"

#include "hetdof/errors.hpp"
#include "hetdof/schemes.hpp"
#include "hetdof/serialization.hpp"

#include <filesystem>
#include <fstream>
#include <random>

using namespace hetdof;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hetdof-ser-" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream(p) << s;
}

}  // namespace

TEST_CASE("topology documents round-trip") {
  const auto lin = make_linear_topology(NetworkConfig::linear(5, 3, 2, 3, 1));
  const Json doc = topology_to_json(lin);
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["kind"] == "linear");
  const auto back = topology_from_json(doc);
  CHECK(back.K == lin.K);
  CHECK(topology_to_json(back) == doc);

  const auto hex = make_hexagonal_topology(2, 3, 13);
  const Json hdoc = topology_to_json(hex);
  CHECK(hdoc["edges"].is_array());
  CHECK(topology_to_json(topology_from_json(hdoc)) == hdoc);
}

TEST_CASE("schedule documents round-trip") {
  const std::vector<Topology> topos = {
      make_linear_topology(NetworkConfig::linear(3, 2, 2, 2, 1)),
      make_linear_topology(NetworkConfig::linear(5, 2, 5, 3, 1)),
      make_hexagonal_topology(2, 2, 13),
  };
  for (const auto& topo : topos) {
    const auto s = generate_schedule(topo);
    const Json doc = schedule_to_json(s);
    const auto back = schedule_from_json(doc);
    CHECK(schedule_to_json(back) == doc);
    CHECK(back.scheme.predicted == s.scheme.predicted);
    CHECK(back.period == s.period);
    // A round-tripped schedule simulates identically.
    const auto ch = sample_channels(topo, 3);
    CHECK(run(back, topo, ch, 9, RunOptions{3}).deliveries() == run(s, topo, ch, 9, RunOptions{3}).deliveries());
  }
}

TEST_CASE("documents with another schema version are rejected") {
  const auto topo = make_linear_topology(NetworkConfig::linear(3, 2, 2, 2, 1));
  Json t = topology_to_json(topo);
  t["schema_version"] = 2;
  CHECK_THROWS_AS(topology_from_json(t), InputError);
  Json s = schedule_to_json(generate_schedule(topo));
  s.erase("schema_version");
  CHECK_THROWS_AS(schedule_from_json(s), InputError);
}

TEST_CASE("field errors name the field") {
  const auto topo = make_linear_topology(NetworkConfig::linear(3, 2, 2, 2, 1));
  Json s = schedule_to_json(generate_schedule(topo));
  s["slots"][0]["backhaul"][0]["targets"][0]["kind"] = "bogus";
  try {
    schedule_from_json(s);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("kind") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry line and column") {
  const auto p = scratch("bad.json");
  write_text(p, "{\n  \"a\": 1,\n  \"b\": ]\n}\n");
  try {
    read_json_file(p);
    FAIL("expected InputError");
  } catch (const InputError& e) {
    const std::string msg = e.what();
    CHECK(msg.find(":3:") != std::string::npos);
    CHECK(msg.find("syntax error") != std::string::npos);
  }
  CHECK_THROWS_AS(read_json_file(p.parent_path() / "missing.json"), InputError);
}

TEST_CASE("write then read gives the same document") {
  const auto p = scratch("topo.json");
  const Json doc = topology_to_json(make_linear_topology(NetworkConfig::linear(4, 2, 3, 2, 1)));
  write_json_file(p, doc);
  CHECK(read_json_file(p) == doc);
  std::ifstream in(p);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.back() == '\n');
}

TEST_CASE("report documents") {
  const auto topo = make_linear_topology(NetworkConfig::linear(3, 2, 2, 2, 1));
  const auto rep = run(generate_schedule(topo), topo, sample_channels(topo, 1), 21, RunOptions{1});
  const Json doc = report_to_json(rep);
  CHECK(doc["schema_version"] == kSchemaVersion);
  CHECK(doc["deliveries"] == 60);
  CHECK(doc["puDoF_finite"] == "10/21");
  CHECK(doc["puDoF_asymptotic"] == "1/2");
  CHECK(doc["violations"].empty());
}

TEST_CASE("summary CSV") {
  CHECK(summary_csv_header() ==
        "K,S,N,L_T,L_B,scheme,seed,T,deliveries,puDoF_finite,puDoF_finite_decimal,puDoF_asymptotic,"
        "puDoF_asymptotic_decimal,predicted,max_residual,violations,bounds_ok,status");
  SummaryRow row;
  row.K = 12;
  row.S = 3;
  row.N = 2;
  row.L_T = 2;
  row.L_B = 1;
  row.scheme = "1A";
  row.seed = 4;
  row.T = 21;
  row.deliveries = 120;
  row.pudof_finite = Rational(10, 21);
  row.pudof_asymptotic = Rational(1, 2);
  row.predicted = Rational(1, 2);
  row.bounds_ok = true;
  row.status = "ok";
  const std::string line = summary_csv_row(row);
  CHECK(line.rfind("12,3,2,2,1,1A,4,21,120,10/21,0.476", 0) == 0);
  CHECK(line.find(",1/2,0.5") != std::string::npos);
  CHECK(line.substr(line.size() - 10) == ",0,true,ok");

  row.pudof_asymptotic.reset();
  const std::string undefined = summary_csv_row(row);
  CHECK(std::count(undefined.begin(), undefined.end(), ',') == std::count(line.begin(), line.end(), ','));
}

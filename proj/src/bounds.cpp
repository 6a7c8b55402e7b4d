#include "hetdof/bounds.hpp"

#include "hetdof/errors.hpp"

namespace hetdof {

BoundSet converse_bounds(int K, int S, int N, int T) {
  if (T < 1) throw InputError("T must be at least 1");
  if (K < 1 || S < 1 || N < 1) throw InputError("K, S and N must be positive");
  BoundSet b;
  b.asymptotic = std::min(Rational(N, S), Rational(1, 2));
  b.half_duplex_T = Rational(T - 1, 2 * static_cast<std::int64_t>(T));
  const std::int64_t clusters = (K + S - 1) / S;
  b.antenna_T = Rational(clusters * (T - 1) * N, static_cast<std::int64_t>(K) * T);
  return b;
}

BoundSet converse_bounds(const NetworkConfig& cfg, int T) {
  return converse_bounds(cfg.K, cfg.S, cfg.N, T);
}

BoundCheck check_scheme_against_bounds(const SimulationReport& report, const BoundSet& bounds) {
  BoundCheck c;
  c.ok = report.pudof_finite <= bounds.finite();
  if (report.asymptotic_defined) {
    c.ok = c.ok && report.pudof_asymptotic <= bounds.asymptotic;
    c.tight = report.pudof_asymptotic == bounds.asymptotic;
  }
  return c;
}

std::string to_string(OracleMode mode) {
  return mode == OracleMode::raw ? "raw" : "combinations";
}

OracleMode parse_oracle_mode(const std::string& text) {
  if (text == "raw") return OracleMode::raw;
  if (text == "combinations") return OracleMode::combinations;
  throw InputError("unknown oracle mode '" + text + "' (expected raw or combinations)");
}

}  // namespace hetdof

#include "hetdof/channel.hpp"

#include "hetdof/errors.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace hetdof {

const Eigen::VectorXcd& ChannelRealization::backhaul_vector(int mb, int sb) const {
  auto it = backhaul.find({mb, sb});
  if (it == backhaul.end()) {
    throw InputError("SB " + std::to_string(sb) + " is outside the footprint of MB " +
                     std::to_string(mb));
  }
  return it->second;
}

cd ChannelRealization::gain(int sb, int mt) const {
  auto it = transmission.find({sb, mt});
  return it == transmission.end() ? cd{} : it->second;
}

ChannelRealization sample_channels(const Topology& topo, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> half(0.0, std::sqrt(0.5));
  auto draw = [&] {
    for (;;) {
      cd z(half(rng), half(rng));
      if (z != cd{}) return z;
    }
  };

  ChannelRealization ch;
  ch.seed = seed;
  ch.antennas = topo.N;
  for (int mb = 1; mb <= topo.backhaul.mb_count(); ++mb) {
    for (int sb : topo.backhaul.footprint(mb)) {
      Eigen::VectorXcd h(topo.N);
      for (int a = 0; a < topo.N; ++a) h(a) = draw();
      ch.backhaul.emplace(std::make_pair(mb, sb), std::move(h));
    }
  }
  for (int sb = 1; sb <= topo.K; ++sb) {
    for (int mt : topo.transmission.reached_by(sb)) {
      ch.transmission.emplace(std::make_pair(sb, mt), draw());
    }
  }
  return ch;
}

double condition_number(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (smax == 0.0 || smin == 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

GenericityReport certify_generic(const ChannelRealization& ch,
                                 std::span<const Subsystem> subsystems) {
  GenericityReport report;
  for (const auto& sub : subsystems) {
    Eigen::MatrixXcd m;
    std::string label;
    if (const auto* b = std::get_if<BackhaulSubsystem>(&sub)) {
      if (static_cast<int>(b->sbs.size()) > ch.antennas) {
        throw InfeasibleShape("backhaul system of MB " + std::to_string(b->mb) + " has " +
                              std::to_string(b->sbs.size()) + " columns but only " +
                              std::to_string(ch.antennas) + " antennas");
      }
      m.resize(ch.antennas, static_cast<Eigen::Index>(b->sbs.size()));
      for (std::size_t k = 0; k < b->sbs.size(); ++k) {
        m.col(static_cast<Eigen::Index>(k)) = ch.backhaul_vector(b->mb, b->sbs[k]);
      }
      label = "backhaul MB " + std::to_string(b->mb);
    } else {
      const auto& g = std::get<GroupSubsystem>(sub);
      m.resize(static_cast<Eigen::Index>(g.mts.size()), static_cast<Eigen::Index>(g.sbs.size()));
      for (std::size_t r = 0; r < g.mts.size(); ++r) {
        for (std::size_t c = 0; c < g.sbs.size(); ++c) {
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              ch.gain(g.sbs[c], g.mts[r]);
        }
      }
      label = "group at SB " + (g.sbs.empty() ? std::string("-") : std::to_string(g.sbs.front()));
    }
    const double cond = condition_number(m);
    if (cond > report.worst_condition || !std::isfinite(cond)) {
      report.worst_condition = cond;
      report.worst_subsystem = label;
    }
    if (!(cond <= kGenericityThreshold)) report.generic = false;
  }
  return report;
}

GenericSample sample_generic_channels(const Topology& topo, std::uint64_t seed,
                                      std::span<const Subsystem> subsystems,
                                      int max_attempts) {
  for (int offset = 0; offset < max_attempts; ++offset) {
    GenericSample out;
    out.channels = sample_channels(topo, seed + static_cast<std::uint64_t>(offset));
    out.report = certify_generic(out.channels, subsystems);
    out.resample_offset = offset;
    if (out.report.generic) return out;
  }
  throw GenericityViolation("no generic channel realization within " +
                            std::to_string(max_attempts) + " attempts from seed " +
                            std::to_string(seed));
}

}  // namespace hetdof

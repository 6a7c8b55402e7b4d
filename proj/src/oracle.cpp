#include "hetdof/bounds.hpp"

#include "hetdof/errors.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

namespace hetdof {

namespace {

using Mask = std::uint32_t;

bool has(Mask m, int node) { return (m >> (node - 1)) & 1U; }

std::vector<int> nodes_of(Mask m) {
  std::vector<int> out;
  for (int k = 1; m >> (k - 1); ++k) {
    if (has(m, k)) out.push_back(k);
  }
  return out;
}

struct Instance {
  Topology topo;
  int K = 0;
  int N = 0;
  std::vector<Mask> footprint;  // index mb-1
  std::vector<Mask> heard;      // index mt-1: SBs MT hears

  int popcount(Mask m) const { return std::popcount(m); }

  /// MB able to feed `sb` while the set `recv` receives, or 0.
  int feeder(int sb, Mask recv) const {
    auto fits = [&](int mb) {
      return has(footprint[mb - 1], sb) && popcount(footprint[mb - 1] & recv) <= N;
    };
    const int own = topo.backhaul.owner(sb);
    if (fits(own)) return own;
    for (int mb = 1; mb <= static_cast<int>(footprint.size()); ++mb) {
      if (fits(mb)) return mb;
    }
    return 0;
  }

  bool receivable(Mask recv) const {
    for (int sb : nodes_of(recv)) {
      if (feeder(sb, recv) == 0) return false;
    }
    return true;
  }

  /// Saturating matching of `sbs` onto MTs (sb -> mt), empty if none exists.
  std::map<int, int> matching(Mask sbs) const {
    std::map<int, int> mt_of_sb;
    std::vector<int> sb_of_mt(K + 1, 0);
    std::vector<bool> seen;
    std::function<bool(int)> augment = [&](int sb) {
      for (int mt = 1; mt <= K; ++mt) {
        if (!has(heard[mt - 1], sb) || seen[mt]) continue;
        seen[mt] = true;
        if (sb_of_mt[mt] == 0 || augment(sb_of_mt[mt])) {
          sb_of_mt[mt] = sb;
          mt_of_sb[sb] = mt;
          return true;
        }
      }
      return false;
    };
    for (int sb : nodes_of(sbs)) {
      seen.assign(K + 1, false);
      if (!augment(sb)) return {};
    }
    return mt_of_sb;
  }

  bool transmittable(Mask x, OracleMode mode) const {
    if (mode == OracleMode::raw) {
      for (int j : nodes_of(x)) {
        if ((heard[j - 1] & x) != (Mask{1} << (j - 1))) return false;
      }
      return true;
    }
    return x == 0 || !matching(x).empty();
  }
};

struct Step {
  int value = -1;
  std::uint64_t prev = 0;
  Mask x = 0;
  Mask r = 0;
};

std::uint64_t pack(const std::vector<int>& counts) {
  std::uint64_t s = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) s |= static_cast<std::uint64_t>(counts[k]) << (4 * k);
  return s;
}

int count_at(std::uint64_t s, int sb) { return static_cast<int>((s >> (4 * (sb - 1))) & 0xF); }

}  // namespace

OracleResult brute_force_max_delivery(const NetworkConfig& cfg, int T, OracleMode mode) {
  if (T < 1) throw InputError("T must be at least 1");
  if (cfg.K > kOracleMaxK || T > kOracleMaxT) {
    throw SearchTooLarge("oracle handles K <= " + std::to_string(kOracleMaxK) + " and T <= " +
                         std::to_string(kOracleMaxT) + " (got K = " + std::to_string(cfg.K) +
                         ", T = " + std::to_string(T) + ")");
  }
  Instance in;
  in.topo = make_linear_topology(cfg);
  in.K = cfg.K;
  in.N = cfg.N;
  for (int mb = 1; mb <= in.topo.mb_count(); ++mb) {
    Mask m = 0;
    for (int sb : in.topo.backhaul.footprint(mb)) m |= Mask{1} << (sb - 1);
    in.footprint.push_back(m);
  }
  for (int mt = 1; mt <= in.K; ++mt) {
    Mask m = 0;
    for (int sb : in.topo.transmission.heard_by(mt)) m |= Mask{1} << (sb - 1);
    in.heard.push_back(m);
  }

  const Mask all = (Mask{1} << in.K) - 1;
  std::vector<bool> can_send(all + 1), can_receive(all + 1);
  for (Mask m = 0; m <= all; ++m) {
    can_send[m] = in.transmittable(m, mode);
    can_receive[m] = in.receivable(m);
  }
  // Receiving more never hurts, so only inclusion-maximal receive sets matter.
  std::vector<std::vector<Mask>> maximal(all + 1);
  for (Mask c = 0; c <= all; ++c) {
    for (Mask s = c;; s = (s - 1) & c) {
      if (can_receive[s]) {
        bool grows = false;
        for (Mask rest = c & ~s; rest && !grows; rest &= rest - 1) {
          grows = can_receive[s | (rest & -rest)];
        }
        if (!grows) maximal[c].push_back(s);
      }
      if (s == 0) break;
    }
    std::sort(maximal[c].begin(), maximal[c].end());
  }

  std::vector<std::map<std::uint64_t, Step>> layers(T + 1);
  layers[0][0] = Step{0, 0, 0, 0};
  for (int t = 1; t <= T; ++t) {
    const int usable_later = T - t;
    for (const auto& [state, step] : layers[t - 1]) {
      Mask avail = 0;
      for (int sb = 1; sb <= in.K; ++sb) {
        if (count_at(state, sb) > 0) avail |= Mask{1} << (sb - 1);
      }
      for (Mask x = avail;; x = (x - 1) & avail) {
        if (can_send[x]) {
          for (Mask r : maximal[all & ~x]) {
            std::vector<int> counts(in.K);
            for (int sb = 1; sb <= in.K; ++sb) {
              counts[sb - 1] = std::min(count_at(state, sb) - (has(x, sb) ? 1 : 0) + (has(r, sb) ? 1 : 0),
                                        usable_later);
            }
            const int value = step.value + std::popcount(x);
            Step& next = layers[t][pack(counts)];
            if (value > next.value) next = Step{value, state, x, r};
          }
        }
        if (x == 0) break;
      }
    }
  }

  auto best = layers[T].begin();
  for (auto it = layers[T].begin(); it != layers[T].end(); ++it) {
    if (it->second.value > best->second.value) best = it;
  }
  std::vector<Mask> send(T + 1), recv(T + 1);
  std::uint64_t state = best->first;
  for (int t = T; t >= 1; --t) {
    const Step& s = layers[t].at(state);
    send[t] = s.x;
    recv[t] = s.r;
    state = s.prev;
  }

  // FIFO token matching; receptions nobody spends are dropped from the witness.
  std::map<std::pair<int, int>, int> spent_at;  // (slot received, sb) -> slot sent
  std::vector<std::deque<int>> tokens(in.K + 1);
  for (int t = 1; t <= T; ++t) {
    for (int sb : nodes_of(send[t])) {
      spent_at[{tokens[sb].front(), sb}] = t;
      tokens[sb].pop_front();
    }
    for (int sb : nodes_of(recv[t])) tokens[sb].push_back(t);
  }

  OracleResult out;
  out.max_deliveries = best->second.value;
  Schedule& w = out.witness;
  w.scheme = SchemeDescriptor{0, "ORACLE", Rational(0)};
  w.cyclic = false;
  w.warmup = 1;
  w.period = 1;
  w.slots.resize(T);
  std::map<std::pair<int, int>, int> group_of;  // (slot, sb) -> group id
  int next_id = 1;
  for (int t = 1; t <= T; ++t) {
    SlotPlan& slot = w.slots[t - 1];
    const auto active = nodes_of(send[t]);
    if (mode == OracleMode::raw) {
      for (int sb : active) {
        group_of[{t, sb}] = next_id;
        slot.transmission.push_back({next_id++, PayloadKind::raw_message, {sb}, {sb}});
      }
    } else if (!active.empty()) {
      const auto match = in.matching(send[t]);
      std::map<int, int> parent;
      for (int sb : active) parent[sb] = sb;
      std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
      for (int mt = 1; mt <= in.K; ++mt) {
        const auto heard = nodes_of(in.heard[mt - 1] & send[t]);
        for (std::size_t k = 1; k < heard.size(); ++k) parent[find(heard[k])] = find(heard[0]);
      }
      std::map<int, TransmissionGroup> groups;
      for (int sb : active) {
        auto& g = groups[find(sb)];
        g.sbs.push_back(sb);
        g.mts.push_back(match.at(sb));
      }
      for (auto& [root, g] : groups) {
        g.id = next_id++;
        g.kind = PayloadKind::group_combination;
        for (int sb : g.sbs) group_of[{t, sb}] = g.id;
        slot.transmission.push_back(std::move(g));
      }
    }
    for (int sb = 1; sb <= in.K; ++sb) {
      if (!has(send[t], sb)) slot.deactivated.push_back(sb);
    }
  }
  for (int t = 1; t <= T; ++t) {
    Mask used = 0;
    for (int sb : nodes_of(recv[t])) {
      if (spent_at.count({t, sb})) used |= Mask{1} << (sb - 1);
    }
    std::map<int, BackhaulPlan> plans;
    for (int sb : nodes_of(used)) {
      const int mb = in.feeder(sb, used);
      const int when = spent_at.at({t, sb});
      const Content c = mode == OracleMode::raw
                            ? Content{PayloadKind::raw_message, sb}
                            : Content{PayloadKind::group_combination, group_of.at({when, sb})};
      plans[mb].mb = mb;
      plans[mb].targets.push_back({sb, c});
    }
    for (auto& [mb, plan] : plans) {
      const auto own = plan.target_sbs();
      for (int sb : nodes_of(in.footprint[mb - 1] & used)) {
        if (std::find(own.begin(), own.end(), sb) == own.end()) plan.nulls.push_back(sb);
      }
      w.slots[t - 1].backhaul.push_back(std::move(plan));
    }
  }
  return out;
}

}  // namespace hetdof

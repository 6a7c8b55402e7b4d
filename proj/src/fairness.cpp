#include "hetdof/errors.hpp"
#include "hetdof/schemes.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>

#include <algorithm>
#include <map>
#include <numeric>

namespace hetdof {

namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using FlowGraph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS, boost::no_property,
    boost::property<boost::edge_capacity_t, long,
                    boost::property<boost::edge_residual_capacity_t, long,
                                    boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
using EdgeDesc = Traits::edge_descriptor;

class Flow {
public:
  explicit Flow(std::size_t vertices) : g_(vertices) {}

  EdgeDesc add(std::size_t u, std::size_t v, long cap) {
    auto cap_map = boost::get(boost::edge_capacity, g_);
    auto rev_map = boost::get(boost::edge_reverse, g_);
    const EdgeDesc e = boost::add_edge(u, v, g_).first;
    const EdgeDesc r = boost::add_edge(v, u, g_).first;
    cap_map[e] = cap;
    cap_map[r] = 0;
    rev_map[e] = r;
    rev_map[r] = e;
    return e;
  }

  long run(std::size_t s, std::size_t t) { return boost::push_relabel_max_flow(g_, s, t); }

  long flow_on(EdgeDesc e) const {
    return boost::get(boost::edge_capacity, g_, e) - boost::get(boost::edge_residual_capacity, g_, e);
  }

private:
  FlowGraph g_;
};

/// Transmitting SBs of one slot split into chains: SBs heard together by some MT.
struct SlotChains {
  std::vector<int> active;          ///< ascending
  std::map<int, int> chain_of_sb;   ///< sb -> chain id
  std::map<int, int> chain_of_mt;   ///< servable mt -> chain id
};

SlotChains chains_of(const SlotPlan& slot, const Topology& topo) {
  SlotChains out;
  out.active = slot.transmitting_sbs();
  std::map<int, int> parent;
  for (int sb : out.active) parent[sb] = sb;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<int>> heard(topo.K + 1);
  for (int mt = 1; mt <= topo.K; ++mt) {
    for (int sb : topo.transmission.heard_by(mt)) {
      if (parent.count(sb)) heard[mt].push_back(sb);
    }
    for (std::size_t k = 1; k < heard[mt].size(); ++k) {
      parent[find(heard[mt][k])] = find(heard[mt][0]);
    }
  }
  for (int sb : out.active) out.chain_of_sb[sb] = find(sb);
  for (int mt = 1; mt <= topo.K; ++mt) {
    if (!heard[mt].empty()) out.chain_of_mt[mt] = find(heard[mt][0]);
  }
  return out;
}

}  // namespace

Schedule apply_fairness_rotation(const Schedule& sched, const Topology& topo) {
  const int K = topo.K;
  const auto base_counts = service_counts(sched, K);
  if (std::adjacent_find(base_counts.begin(), base_counts.end(), std::not_equal_to<>()) ==
      base_counts.end()) {
    return sched;
  }
  if (!sched.cyclic || sched.warmup != 1 || sched.period < 1) {
    throw InputError("fairness rotation needs a cyclic schedule with one warm-up slot");
  }
  const int period = sched.period;
  // Pipelined: whoever receives in slot t transmits in slot t+1.
  for (int t = 1; t <= 1 + period; ++t) {
    if (sched.at(t).receiving_sbs() != sched.at(t + 1).transmitting_sbs()) {
      throw InputError("fairness rotation needs a pipelined schedule (slot " +
                       std::to_string(t) + " receivers differ from slot " +
                       std::to_string(t + 1) + " transmitters)");
    }
  }

  std::vector<SlotChains> chains;
  long per_period = 0;
  for (int p = 0; p < period; ++p) {
    chains.push_back(chains_of(sched.at(2 + p), topo));
    per_period += static_cast<long>(chains.back().active.size());
  }
  const long copies = K / std::gcd(per_period, static_cast<long>(K));
  const long target = per_period * copies / K;

  // Vertex layout: source, sink, (copy, slot, sb), (copy, slot, mt), mt.
  const std::size_t source = 0, sink = 1;
  auto sb_vertex = [&](long c, int p, int sb) {
    return 2 + static_cast<std::size_t>((c * period + p) * K + (sb - 1));
  };
  const std::size_t mt_base = 2 + static_cast<std::size_t>(copies * period * K);
  auto mt_vertex = [&](long c, int p, int mt) {
    return mt_base + static_cast<std::size_t>((c * period + p) * K + (mt - 1));
  };
  const std::size_t total_base = mt_base + static_cast<std::size_t>(copies * period * K);
  Flow flow(total_base + static_cast<std::size_t>(K));

  struct Arc {
    long copy;
    int slot;
    int sb;
    int mt;
    EdgeDesc edge;
  };
  std::vector<Arc> arcs;
  for (long c = 0; c < copies; ++c) {
    for (int p = 0; p < period; ++p) {
      const auto& sc = chains[p];
      for (int sb : sc.active) {
        flow.add(source, sb_vertex(c, p, sb), 1);
        for (int mt : topo.transmission.reached_by(sb)) {
          auto it = sc.chain_of_mt.find(mt);
          if (it == sc.chain_of_mt.end() || it->second != sc.chain_of_sb.at(sb)) continue;
          arcs.push_back({c, p, sb, mt, flow.add(sb_vertex(c, p, sb), mt_vertex(c, p, mt), 1)});
        }
      }
      for (int mt = 1; mt <= K; ++mt) {
        if (sc.chain_of_mt.count(mt)) flow.add(mt_vertex(c, p, mt), total_base + (mt - 1), 1);
      }
    }
  }
  for (int mt = 1; mt <= K; ++mt) flow.add(total_base + (mt - 1), sink, target);

  if (flow.run(source, sink) != per_period * copies) {
    throw UnsupportedConfiguration("no equal-service assignment exists for this schedule");
  }

  // served[c][p]: sb -> mt
  std::vector<std::vector<std::map<int, int>>> served(
      copies, std::vector<std::map<int, int>>(period));
  for (const auto& a : arcs) {
    if (flow.flow_on(a.edge) > 0) served[a.copy][a.slot][a.sb] = a.mt;
  }

  Schedule out;
  out.scheme = sched.scheme;
  out.warmup = 1;
  out.period = static_cast<int>(copies) * period;
  out.cyclic = true;
  out.slots.resize(1 + out.period);

  // Groups of each block slot, and the content each SB needs to hold for them.
  std::vector<std::map<int, Content>> needs(out.period);
  int next_id = 1;
  for (long c = 0; c < copies; ++c) {
    for (int p = 0; p < period; ++p) {
      const int q = static_cast<int>(c) * period + p;
      auto& slot = out.slots[1 + q];
      std::map<int, std::vector<int>> members;
      for (const auto& [sb, chain] : chains[p].chain_of_sb) members[chain].push_back(sb);
      for (auto& [chain, sbs] : members) {
        TransmissionGroup g;
        g.id = next_id++;
        g.sbs = sbs;
        for (int sb : sbs) g.mts.push_back(served[c][p].at(sb));
        g.kind = sbs.size() == 1 ? PayloadKind::raw_message : PayloadKind::group_combination;
        for (int sb : sbs) {
          needs[q][sb] = g.kind == PayloadKind::raw_message ? Content{g.kind, g.mts.front()}
                                                            : Content{g.kind, g.id};
        }
        slot.transmission.push_back(std::move(g));
      }
      std::vector<bool> active(K + 1, false);
      for (int sb : chains[p].active) active[sb] = true;
      for (int k = 1; k <= K; ++k) {
        if (!active[k]) slot.deactivated.push_back(k);
      }
    }
  }
  // Backhaul of output slot q feeds block slot q+1 (cyclically); slot 0 is warm-up.
  for (int q = 0; q <= out.period; ++q) {
    const int template_slot = q == 0 ? 1 : 2 + (q - 1) % period;
    const int feeds = q % out.period;
    auto plans = sched.at(template_slot).backhaul;
    for (auto& plan : plans) {
      for (auto& d : plan.targets) d.content = needs[feeds].at(d.sb);
    }
    out.slots[q].backhaul = std::move(plans);
    if (q == 0) {
      for (int k = 1; k <= K; ++k) out.slots[0].deactivated.push_back(k);
    }
  }
  return out;
}

}  // namespace hetdof

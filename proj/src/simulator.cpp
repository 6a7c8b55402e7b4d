#include "hetdof/simulator.hpp"

#include "hetdof/errors.hpp"
#include "hetdof/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <tuple>

namespace hetdof {

namespace {

// Linear form over message symbols: key (mt, slot) -> coefficient.
using Form = std::map<std::uint64_t, cd>;

std::uint64_t key_of(int mt, int slot) {
  return (static_cast<std::uint64_t>(mt) << 32) | static_cast<std::uint32_t>(slot);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void axpy(Form& y, cd a, const Form& x) {
  for (const auto& [k, v] : x) y[k] += a * v;
}

struct Buffered {
  Content content;
  int slot = 0;
  Form form;
};

class Evaluator {
public:
  explicit Evaluator(std::uint64_t seed) : seed_(seed) {}

  cd symbol(std::uint64_t key) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const cd s = message_symbol(seed_, static_cast<int>(key >> 32),
                                static_cast<int>(key & 0xFFFFFFFFULL));
    cache_.emplace(key, s);
    return s;
  }

  cd value(const Form& f) {
    cd sum{0.0, 0.0};
    for (const auto& [k, v] : f) sum += v * symbol(k);
    return sum;
  }

private:
  std::uint64_t seed_;
  std::map<std::uint64_t, cd> cache_;
};

}  // namespace

cd message_symbol(std::uint64_t seed, int mt, int slot) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(key_of(mt, slot)));
  const double phase = 2.0 * std::numbers::pi * static_cast<double>(h % 8) / 8.0;
  return std::polar(1.0, phase);
}

SimulationReport run(const Schedule& sched, const Topology& topo, const ChannelProvider& channels,
                     int T, const RunOptions& options) {
  if (T < 1) throw InputError("T must be at least 1");
  SimulationReport rep;
  rep.K = topo.K;
  rep.T = T;
  rep.warmup = sched.warmup;
  rep.period = sched.period;
  rep.per_slot_deliveries.assign(T, 0);
  rep.violations = audit_schedule(sched, topo, T);

  std::set<std::tuple<ViolationKind, int, int>> seen;
  for (const auto& v : rep.violations) seen.emplace(v.kind, v.slot, v.node);
  auto flag = [&](ViolationKind k, int slot, int node, std::string detail) {
    if (seen.emplace(k, slot, node).second) rep.violations.push_back({k, slot, node, std::move(detail)});
  };

  Evaluator eval(options.message_seed);
  std::map<int, std::deque<Buffered>> buffers;
  const double tol = options.tolerance;

  for (int t = 1; t <= T; ++t) {
    const SlotPlan& slot = sched.at(t);
    const ChannelRealization ch = channels(t);

    // Transmission layer: SBs spend buffered content.
    std::map<int, Form> sent;
    struct Attempt {
      int mt;
      std::uint64_t key;
    };
    std::vector<Attempt> attempts;
    for (const auto& g : slot.transmission) {
      for (std::size_t k = 0; k < g.sbs.size(); ++k) {
        const int sb = g.sbs[k];
        const int mt = k < g.mts.size() ? g.mts[k] : 0;
        const bool raw = g.kind == PayloadKind::raw_message;
        const Content need = raw ? Content{g.kind, mt} : Content{g.kind, g.id};
        auto& buf = buffers[sb];
        auto it = std::find_if(buf.begin(), buf.end(), [&](const Buffered& b) {
          return b.content == need && b.slot < t;
        });
        if (it == buf.end()) {
          flag(ViolationKind::causality, t, sb, "buffer holds no matching content");
          if (mt != 0) attempts.push_back({mt, key_of(mt, raw ? 0 : t)});
          continue;
        }
        Form x;
        if (raw) {
          const cd h = ch.gain(sb, mt);
          if (h != cd{0.0, 0.0}) axpy(x, 1.0 / h, it->form);
          attempts.push_back({mt, key_of(mt, it->slot)});
        } else if (mt != 0) {
          x = it->form;
          attempts.push_back({mt, key_of(mt, t)});
        }
        axpy(sent[sb], 1.0, x);
        buf.erase(it);
      }
    }
    for (const auto& a : attempts) {
      Form y;
      for (int sb : topo.transmission.heard_by(a.mt)) {
        auto it = sent.find(sb);
        if (it != sent.end()) axpy(y, ch.gain(sb, a.mt), it->second);
      }
      const cd w = eval.symbol(a.key);
      const cd got = eval.value(y);
      const auto own = y.find(a.key);
      const cd own_coef = own == y.end() ? cd{0.0, 0.0} : own->second;
      const double scale = 1.0 + std::abs(w);
      const double residual = std::abs(got - w) / scale;
      const double interference = std::abs(got - own_coef * w) / scale;
      rep.max_residual = std::max(rep.max_residual, residual);
      rep.max_interference = std::max(rep.max_interference, interference);
      if (residual <= tol && interference <= tol) {
        rep.delivered.push_back({a.mt, t, w, got, residual, interference});
        ++rep.per_slot_deliveries[t - 1];
      } else {
        flag(ViolationKind::separation, t, a.mt,
             "sample misses its symbol (residual " + std::to_string(residual) + ")");
      }
    }

    // Backhaul layer: MBs fill SB buffers for later slots.
    struct Solved {
      const BackhaulPlan* plan;
      Eigen::MatrixXcd basis;
      std::vector<Form> payload;
    };
    std::vector<Solved> solved;
    for (const auto& plan : slot.backhaul) {
      if (plan.targets.empty()) continue;
      const auto targets = plan.target_sbs();
      Eigen::MatrixXcd basis;
      try {
        basis = backhaul_precoder_basis(plan.mb, targets, plan.nulls, ch);
      } catch (const InfeasibleShape&) {
        flag(ViolationKind::antenna, t, plan.mb, "precoder shape exceeds the antenna count");
        continue;
      } catch (const InputError& e) {
        flag(ViolationKind::antenna, t, plan.mb, e.what());
        continue;
      }
      Solved s{&plan, std::move(basis), {}};
      for (const auto& d : plan.targets) {
        Form f;
        if (d.content.kind == PayloadKind::raw_message) {
          f[key_of(d.content.ref, t)] = 1.0;
        } else {
          const int when = sched.next_group_slot(d.content.ref, t);
          const TransmissionGroup* g = when ? sched.at(when).find_group(d.content.ref) : nullptr;
          const bool usable = g != nullptr && g->sbs.size() == g->mts.size() &&
                              std::find(g->sbs.begin(), g->sbs.end(), d.sb) != g->sbs.end();
          if (usable) {
            const auto pos = std::find(g->sbs.begin(), g->sbs.end(), d.sb);
            const auto& later = channels(when);
            const Eigen::MatrixXcd inv = group_inverse(g->sbs, g->mts, later);
            const auto row = static_cast<Eigen::Index>(pos - g->sbs.begin());
            for (std::size_t m = 0; m < g->mts.size(); ++m) {
              f[key_of(g->mts[m], when)] += inv(row, static_cast<Eigen::Index>(m));
            }
          }
        }
        s.payload.push_back(std::move(f));
      }
      solved.push_back(std::move(s));
    }

    const auto transmitting = slot.transmitting_sbs();
    for (const auto& own : solved) {
      for (std::size_t k = 0; k < own.plan->targets.size(); ++k) {
        const Delivery& d = own.plan->targets[k];
        if (std::binary_search(transmitting.begin(), transmitting.end(), d.sb)) continue;
        Form y;
        double leakage = 0.0;
        for (const auto& other : solved) {
          if (!ch.reaches(other.plan->mb, d.sb)) continue;
          const Eigen::RowVectorXcd c =
              ch.backhaul_vector(other.plan->mb, d.sb).transpose() * other.basis;
          Form part;
          for (Eigen::Index j = 0; j < c.size(); ++j) {
            axpy(part, c(j), other.payload[static_cast<std::size_t>(j)]);
          }
          if (&other != &own) leakage += std::abs(eval.value(part));
          axpy(y, 1.0, part);
        }
        const cd want = eval.value(own.payload[k]);
        const double residual = std::abs(eval.value(y) - want) / (1.0 + std::abs(want));
        rep.max_residual = std::max(rep.max_residual, residual);
        rep.max_backhaul_leakage = std::max(rep.max_backhaul_leakage, leakage);
        if (residual > tol || leakage > tol) {
          flag(ViolationKind::nulling, t, d.sb,
               "backhaul sample corrupted (residual " + std::to_string(residual) + ")");
        }
        buffers[d.sb].push_back({d.content, t, std::move(y)});
      }
    }
  }

  std::sort(rep.violations.begin(), rep.violations.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.slot, a.kind, a.node) < std::tie(b.slot, b.kind, b.node);
  });
  rep.pudof_finite = Rational(rep.deliveries(), static_cast<std::int64_t>(rep.K) * T);
  if (T >= rep.warmup + rep.period && rep.period > 0) {
    rep.pudof_asymptotic = measure_pudof(rep).second;
    rep.asymptotic_defined = true;
  }
  return rep;
}

SimulationReport run(const Schedule& sched, const Topology& topo, const ChannelRealization& ch,
                     int T, const RunOptions& options) {
  return run(sched, topo, [&ch](int) -> const ChannelRealization& { return ch; }, T, options);
}

std::pair<Rational, Rational> measure_pudof(const SimulationReport& report) {
  if (report.K < 1) throw InputError("report has no users");
  if (report.period < 1 || report.T < report.warmup + report.period) {
    throw InputError("T = " + std::to_string(report.T) +
                     " is shorter than warm-up plus one period; asymptotic puDoF undefined");
  }
  const Rational finite(report.deliveries(), static_cast<std::int64_t>(report.K) * report.T);
  const int full = (report.T - report.warmup) / report.period;
  const int first = report.warmup + (full - 1) * report.period + 1;
  const int last = first + report.period - 1;
  std::int64_t window = 0;
  for (int t = first; t <= last; ++t) window += report.per_slot_deliveries[t - 1];
  const Rational asymptotic(window, static_cast<std::int64_t>(report.K) * report.period);
  return {finite, asymptotic};
}

std::vector<int> delivery_counts(const SimulationReport& report, int first, int last) {
  std::vector<int> counts(report.K, 0);
  for (const auto& d : report.delivered) {
    if (d.slot >= first && d.slot <= last) ++counts[d.mt - 1];
  }
  return counts;
}

}  // namespace hetdof

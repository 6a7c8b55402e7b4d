#include "hetdof/topology.hpp"

#include "hetdof/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace hetdof {

namespace {

int ceil_half(int x) { return (x + 1) / 2; }
int floor_half(int x) { return x / 2; }

void check_node(int node, int count, const char* what) {
  if (node < 1 || node > count) {
    throw InputError(std::string(what) + " index " + std::to_string(node) +
                     " outside [1, " + std::to_string(count) + "]");
  }
}

}  // namespace

NetworkConfig::NetworkConfig(int K_, int K_B_, int S_, int N_, int L_T_, int L_B_)
    : K(K_), K_B(K_B_), S(S_), N(N_), L_T(L_T_), L_B(L_B_) {
  if (K < 1 || S < 1 || K_B < 1) throw InputError("K, S and K_B must be positive");
  if (N < 1) throw InputError("N must be at least 1");
  if (L_T < 0 || L_B < 0) throw InputError("connectivity parameters must be non-negative");
  if (K != S * K_B) {
    throw InputError("K = " + std::to_string(K) + " differs from S*K_B = " +
                     std::to_string(S * K_B));
  }
}

// ---------------------------------------------------------------------------

InterferenceGraph::InterferenceGraph(std::vector<std::vector<int>> interferers)
    : interferers_(std::move(interferers)), reached_(interferers_.size()) {
  const int n = node_count();
  for (int i = 1; i <= n; ++i) {
    auto& set = interferers_[i - 1];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (int j : set) {
      check_node(j, n, "interferer");
      if (j == i) throw InputError("node " + std::to_string(i) + " lists itself as interferer");
    }
  }
  for (int mt = 1; mt <= n; ++mt) {
    reached_[mt - 1].push_back(mt);
    for (int sb : interferers_[mt - 1]) reached_[sb - 1].push_back(mt);
  }
  for (auto& r : reached_) std::sort(r.begin(), r.end());
}

const std::vector<int>& InterferenceGraph::interferers(int node) const {
  check_node(node, node_count(), "node");
  return interferers_[node - 1];
}

bool InterferenceGraph::hears(int mt, int sb) const {
  if (mt == sb) return true;
  const auto& set = interferers(mt);
  return std::binary_search(set.begin(), set.end(), sb);
}

std::vector<int> InterferenceGraph::heard_by(int mt) const {
  std::vector<int> out = interferers(mt);
  out.insert(std::upper_bound(out.begin(), out.end(), mt), mt);
  return out;
}

std::vector<int> InterferenceGraph::reached_by(int sb) const {
  check_node(sb, node_count(), "node");
  return reached_[sb - 1];
}

bool InterferenceGraph::symmetric() const {
  for (int i = 1; i <= node_count(); ++i) {
    for (int j : interferers_[i - 1]) {
      if (!hears(j, i)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

BackhaulAssociation::BackhaulAssociation(std::vector<std::vector<int>> clusters,
                                         std::vector<std::vector<int>> footprints,
                                         int node_count)
    : clusters_(std::move(clusters)),
      footprints_(std::move(footprints)),
      owner_(node_count, 0),
      node_count_(node_count) {
  if (clusters_.size() != footprints_.size()) {
    throw InputError("cluster and footprint maps disagree on the MB count");
  }
  for (int mb = 1; mb <= mb_count(); ++mb) {
    auto& fp = footprints_[mb - 1];
    std::sort(fp.begin(), fp.end());
    for (int sb : clusters_[mb - 1]) {
      check_node(sb, node_count_, "cluster SB");
      if (owner_[sb - 1] != 0) throw InputError("clusters overlap at SB " + std::to_string(sb));
      owner_[sb - 1] = mb;
      if (!std::binary_search(fp.begin(), fp.end(), sb)) {
        throw InputError("cluster of MB " + std::to_string(mb) + " not inside its footprint");
      }
    }
    for (int sb : fp) check_node(sb, node_count_, "footprint SB");
  }
  for (int sb = 1; sb <= node_count_; ++sb) {
    if (owner_[sb - 1] == 0) throw InputError("SB " + std::to_string(sb) + " has no cluster");
  }
}

const std::vector<int>& BackhaulAssociation::cluster(int mb) const {
  check_node(mb, mb_count(), "MB");
  return clusters_[mb - 1];
}

const std::vector<int>& BackhaulAssociation::footprint(int mb) const {
  check_node(mb, mb_count(), "MB");
  return footprints_[mb - 1];
}

int BackhaulAssociation::owner(int sb) const {
  check_node(sb, node_count_, "SB");
  return owner_[sb - 1];
}

bool BackhaulAssociation::in_footprint(int mb, int sb) const {
  const auto& fp = footprint(mb);
  return std::binary_search(fp.begin(), fp.end(), sb);
}

std::vector<int> BackhaulAssociation::covering(int sb) const {
  std::vector<int> out;
  for (int mb = 1; mb <= mb_count(); ++mb) {
    if (in_footprint(mb, sb)) out.push_back(mb);
  }
  return out;
}

// ---------------------------------------------------------------------------

bool hex_class_a(int position) {
  return std::find(std::begin(kHexClassA), std::end(kHexClassA), position) !=
         std::end(kHexClassA);
}

HexBlockMap::HexBlockMap(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw InputError("block grid dimensions must be positive");
  clusters_.resize(block_count());
  footprints_.resize(block_count());
  auto neighbour = [&](std::vector<int>& out, int r, int c, std::initializer_list<int> ps) {
    if (r < 1 || r > rows_ || c < 1 || c > cols_) return;
    for (int p : ps) out.push_back(node_of(r, c, p));
  };
  for (int r = 1; r <= rows_; ++r) {
    for (int c = 1; c <= cols_; ++c) {
      const int mb = mb_of_block(r, c);
      auto& own = clusters_[mb - 1];
      for (int p = 1; p <= 9; ++p) own.push_back(node_of(r, c, p));
      auto& fp = footprints_[mb - 1];
      fp = own;
      neighbour(fp, r - 1, c, {7, 8, 9});
      neighbour(fp, r + 1, c, {1, 2, 3});
      neighbour(fp, r, c + 1, {1, 4, 7});
      neighbour(fp, r, c - 1, {3, 6, 9});
      std::sort(fp.begin(), fp.end());
    }
  }
}

int HexBlockMap::node_of(int row, int col, int position) const {
  if (row < 1 || row > rows_ || col < 1 || col > cols_ || position < 1 || position > 9) {
    throw InputError("hexagonal block coordinate out of range");
  }
  return (mb_of_block(row, col) - 1) * 9 + position;
}

std::pair<int, int> HexBlockMap::block_of(int node) const {
  check_node(node, node_count(), "node");
  const int block = (node - 1) / 9;
  return {block / cols_ + 1, block % cols_ + 1};
}

const std::vector<int>& HexBlockMap::cluster(int mb) const {
  check_node(mb, block_count(), "MB");
  return clusters_[mb - 1];
}

const std::vector<int>& HexBlockMap::footprint(int mb) const {
  check_node(mb, block_count(), "MB");
  return footprints_[mb - 1];
}

bool HexBlockMap::interior(int mb) const {
  const int r = (mb - 1) / cols_ + 1;
  const int c = (mb - 1) % cols_ + 1;
  return r > 1 && r < rows_ && c > 1 && c < cols_;
}

BackhaulAssociation HexBlockMap::association() const {
  return BackhaulAssociation(clusters_, footprints_, node_count());
}

// ---------------------------------------------------------------------------

InterferenceGraph build_transmission_interference(int K, int L_T) {
  if (K < 1 || L_T < 0) throw InputError("need K >= 1 and L_T >= 0");
  std::vector<std::vector<int>> sets(K);
  for (int i = 1; i <= K; ++i) {
    const int lo = std::max(1, i - ceil_half(L_T));
    const int hi = std::min(K, i + floor_half(L_T));
    for (int j = lo; j <= hi; ++j) {
      if (j != i) sets[i - 1].push_back(j);
    }
  }
  return InterferenceGraph(std::move(sets));
}

BackhaulAssociation build_backhaul_association(const NetworkConfig& cfg) {
  const int S = cfg.S;
  std::vector<std::vector<int>> clusters(cfg.K_B), footprints(cfg.K_B);
  for (int i = 1; i <= cfg.K_B; ++i) {
    for (int p = 1; p <= S; ++p) clusters[i - 1].push_back((i - 1) * S + p);
  }
  const int above = std::min(S, floor_half(cfg.L_B));
  const int below = std::min(S, ceil_half(cfg.L_B));
  for (int i = 1; i <= cfg.K_B; ++i) {
    auto& fp = footprints[i - 1];
    if (i > 1) {
      for (int p = S - above + 1; p <= S; ++p) fp.push_back((i - 2) * S + p);
    }
    fp.insert(fp.end(), clusters[i - 1].begin(), clusters[i - 1].end());
    if (i < cfg.K_B) {
      for (int p = 1; p <= below; ++p) fp.push_back(i * S + p);
    }
  }
  return BackhaulAssociation(std::move(clusters), std::move(footprints), cfg.K);
}

std::vector<Edge> default_hex_edges(int blocks_rows, int blocks_cols) {
  const HexBlockMap map(blocks_rows, blocks_cols);
  const int R = 3 * blocks_rows;
  const int C = 3 * blocks_cols;
  auto node_at = [&](int gr, int gc) {
    return map.node_of(gr / 3 + 1, gc / 3 + 1, 3 * (gr % 3) + gc % 3 + 1);
  };
  std::set<Edge> edges;
  for (int gr = 0; gr < R; ++gr) {
    for (int gc = 0; gc < C; ++gc) {
      const int a = node_at(gr, gc);
      const int da[3][2] = {{0, 1}, {1, 0}, {1, 1}};
      for (const auto& d : da) {
        const int nr = gr + d[0], nc = gc + d[1];
        if (nr >= R || nc >= C) continue;
        const int b = node_at(nr, nc);
        if (hex_class_a(map.position_of(a)) != hex_class_a(map.position_of(b))) {
          edges.insert({std::min(a, b), std::max(a, b)});
        }
      }
    }
  }
  return {edges.begin(), edges.end()};
}

std::pair<InterferenceGraph, HexBlockMap> build_hexagonal(
    int blocks_rows, int blocks_cols, const std::optional<std::vector<Edge>>& edges) {
  HexBlockMap map(blocks_rows, blocks_cols);
  const auto list = edges ? *edges : default_hex_edges(blocks_rows, blocks_cols);
  std::vector<std::vector<int>> adj(map.node_count());
  for (const auto& [a, b] : list) {
    check_node(a, map.node_count(), "edge endpoint");
    check_node(b, map.node_count(), "edge endpoint");
    if (a == b) throw InputError("self-loop edge at node " + std::to_string(a));
    adj[a - 1].push_back(b);
    adj[b - 1].push_back(a);
  }
  return {InterferenceGraph(std::move(adj)), std::move(map)};
}

std::vector<int> active_footprint_receivers(const BackhaulAssociation& assoc, int mb,
                                            std::span<const int> receiving) {
  const auto& own = assoc.cluster(mb);
  std::set<int> out;
  for (int sb : receiving) {
    if (assoc.in_footprint(mb, sb) && std::find(own.begin(), own.end(), sb) == own.end()) {
      out.insert(sb);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<int> active_footprint_receivers(const HexBlockMap& hex, int mb,
                                            std::span<const int> receiving) {
  const auto& own = hex.cluster(mb);
  const auto& fp = hex.footprint(mb);
  std::set<int> out;
  for (int sb : receiving) {
    if (std::binary_search(fp.begin(), fp.end(), sb) &&
        std::find(own.begin(), own.end(), sb) == own.end()) {
      out.insert(sb);
    }
  }
  return {out.begin(), out.end()};
}

bool structurally_invertible(const InterferenceGraph& graph, std::span<const int> sbs,
                             std::span<const int> mts) {
  if (sbs.size() != mts.size()) return false;
  const std::size_t n = sbs.size();
  std::vector<int> match_of_sb(n, -1);
  // Kuhn's augmenting paths; groups are small.
  std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t m,
                                                                    std::vector<bool>& seen) {
    for (std::size_t k = 0; k < n; ++k) {
      if (seen[k] || !graph.hears(mts[m], sbs[k])) continue;
      seen[k] = true;
      if (match_of_sb[k] < 0 || augment(static_cast<std::size_t>(match_of_sb[k]), seen)) {
        match_of_sb[k] = static_cast<int>(m);
        return true;
      }
    }
    return false;
  };
  for (std::size_t m = 0; m < n; ++m) {
    std::vector<bool> seen(n, false);
    if (!augment(m, seen)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

int Topology::cluster_size() const {
  if (config) return config->S;
  return 9;
}

Topology make_linear_topology(const NetworkConfig& cfg) {
  Topology t;
  t.kind = TopologyKind::linear;
  t.K = cfg.K;
  t.N = cfg.N;
  t.config = cfg;
  t.transmission = build_transmission_interference(cfg.K, cfg.L_T);
  t.backhaul = build_backhaul_association(cfg);
  return t;
}

Topology make_hexagonal_topology(int blocks_rows, int blocks_cols, int N,
                                 const std::optional<std::vector<Edge>>& edges) {
  if (N < 1) throw InputError("N must be at least 1");
  auto [graph, map] = build_hexagonal(blocks_rows, blocks_cols, edges);
  Topology t;
  t.kind = TopologyKind::hexagonal;
  t.K = map.node_count();
  t.N = N;
  t.edges = edges ? *edges : default_hex_edges(blocks_rows, blocks_cols);
  t.backhaul = map.association();
  t.hex = std::move(map);
  t.transmission = std::move(graph);
  return t;
}

}  // namespace hetdof

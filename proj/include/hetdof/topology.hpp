#pragma once

// Interference graphs for the two network layers.
//
// All node and MB indices are 1-based. In the linear network SB j, MT j and
// the SB-MT pair j share the index j; MB i serves the cluster
// {(i-1)S+1, ..., iS}. In the hexagonal network MB (r, c) serves the nine
// nodes of block (r, c) and is numbered (r-1)*cols + c.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hetdof {

struct NetworkConfig {
  int K = 0;    ///< SB-MT pairs
  int K_B = 0;  ///< macro base stations
  int S = 0;    ///< SBs per MB cluster
  int N = 0;    ///< antennas per MB
  int L_T = 0;  ///< transmission-layer connectivity
  int L_B = 0;  ///< backhaul-layer connectivity

  NetworkConfig() = default;
  /// Throws InputError unless K == S*K_B, K,S,N >= 1 and L_T,L_B >= 0.
  NetworkConfig(int K, int K_B, int S, int N, int L_T, int L_B);

  static NetworkConfig linear(int S, int K_B, int N, int L_T, int L_B) {
    return NetworkConfig(S * K_B, K_B, S, N, L_T, L_B);
  }

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Per-receiver interferer sets. For the linear layer, interferers(i) lists
/// the SBs other than i heard by MT i; for the hexagonal layer it is the
/// (symmetric) adjacency of node i.
class InterferenceGraph {
public:
  InterferenceGraph() = default;
  explicit InterferenceGraph(std::vector<std::vector<int>> interferers);

  int node_count() const { return static_cast<int>(interferers_.size()); }
  const std::vector<int>& interferers(int node) const;
  /// True when MT `mt` receives a nonzero signal from SB `sb` (including sb == mt).
  bool hears(int mt, int sb) const;
  /// SBs whose signal reaches `mt`, ascending, including `mt` itself.
  std::vector<int> heard_by(int mt) const;
  /// MTs reached by `sb`, ascending, including `sb` itself.
  std::vector<int> reached_by(int sb) const;
  bool symmetric() const;

private:
  std::vector<std::vector<int>> interferers_;
  std::vector<std::vector<int>> reached_;
};

class BackhaulAssociation {
public:
  BackhaulAssociation() = default;
  BackhaulAssociation(std::vector<std::vector<int>> clusters,
                      std::vector<std::vector<int>> footprints, int node_count);

  int mb_count() const { return static_cast<int>(clusters_.size()); }
  int node_count() const { return node_count_; }
  const std::vector<int>& cluster(int mb) const;
  const std::vector<int>& footprint(int mb) const;
  /// The MB whose cluster contains `sb`.
  int owner(int sb) const;
  bool in_footprint(int mb, int sb) const;
  /// MBs whose footprint contains `sb`, ascending.
  std::vector<int> covering(int sb) const;

private:
  std::vector<std::vector<int>> clusters_;
  std::vector<std::vector<int>> footprints_;
  std::vector<int> owner_;
  int node_count_ = 0;
};

/// Block layout of the hexagonal model. Positions 1..9 are laid out as a 3x3
/// grid within the block: row 1 = {1,2,3}, row 3 = {7,8,9}, column 1 =
/// {1,4,7}, column 3 = {3,6,9}.
class HexBlockMap {
public:
  HexBlockMap() = default;
  HexBlockMap(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int block_count() const { return rows_ * cols_; }
  int node_count() const { return 9 * block_count(); }
  int mb_of_block(int row, int col) const { return (row - 1) * cols_ + col; }
  /// Global node index of position p of block (row, col).
  int node_of(int row, int col, int position) const;
  int position_of(int node) const { return (node - 1) % 9 + 1; }
  std::pair<int, int> block_of(int node) const;
  const std::vector<int>& cluster(int mb) const;
  const std::vector<int>& footprint(int mb) const;
  bool interior(int mb) const;
  BackhaulAssociation association() const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::vector<int>> clusters_;
  std::vector<std::vector<int>> footprints_;
};

/// Positions of the two mutually non-interfering classes of the hexagonal block.
inline constexpr int kHexClassA[] = {1, 4, 7, 8, 9};
inline constexpr int kHexClassB[] = {2, 3, 5, 6};
bool hex_class_a(int position);

using Edge = std::pair<int, int>;

InterferenceGraph build_transmission_interference(int K, int L_T);
BackhaulAssociation build_backhaul_association(const NetworkConfig& cfg);

/// Builds the hexagonal interference graph and block map. Without an explicit
/// edge list the default class-bipartite adjacency is generated
/// (see default_hex_edges).
std::pair<InterferenceGraph, HexBlockMap> build_hexagonal(
    int blocks_rows, int blocks_cols,
    const std::optional<std::vector<Edge>>& edges = std::nullopt);

/// Default adjacency: nodes sit on a (3*rows) x (3*cols) lattice; lattice
/// neighbours to the right, below and below-right are connected iff one is a
/// class-A position and the other class-B. Each edge is listed once, (a < b).
std::vector<Edge> default_hex_edges(int blocks_rows, int blocks_cols);

/// (footprint(mb) \ cluster(mb)) intersected with `receiving`, ascending.
std::vector<int> active_footprint_receivers(const BackhaulAssociation& assoc, int mb,
                                            std::span<const int> receiving);
std::vector<int> active_footprint_receivers(const HexBlockMap& hex, int mb,
                                            std::span<const int> receiving);

/// True iff |sbs| == |mts| and the support of the group matrix admits a
/// perfect matching, i.e. the matrix is invertible for generic gains.
bool structurally_invertible(const InterferenceGraph& graph, std::span<const int> sbs,
                             std::span<const int> mts);

enum class TopologyKind { linear, hexagonal };

/// Everything the schemes and the simulator need to know about a network.
struct Topology {
  TopologyKind kind = TopologyKind::linear;
  int K = 0;
  int N = 0;
  std::optional<NetworkConfig> config;  ///< linear only
  std::optional<HexBlockMap> hex;       ///< hexagonal only
  std::vector<Edge> edges;              ///< hexagonal only
  InterferenceGraph transmission;
  BackhaulAssociation backhaul;

  /// Cluster size used by the converse bound (S, or 9 for hexagonal blocks).
  int cluster_size() const;
  int mb_count() const { return backhaul.mb_count(); }
};

Topology make_linear_topology(const NetworkConfig& cfg);
Topology make_hexagonal_topology(int blocks_rows, int blocks_cols, int N,
                                 const std::optional<std::vector<Edge>>& edges = std::nullopt);

}  // namespace hetdof

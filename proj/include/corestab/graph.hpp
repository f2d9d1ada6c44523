#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace corestab {

using NodeId = std::uint32_t;
using NodeLabel = std::int64_t;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

/// Undirected edge in canonical orientation (u < v).
struct Edge {
  NodeId u;
  NodeId v;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  NodeId node;
  double weight;
};

/// Undirected weighted simple graph over dense ids 0..n-1.
///
/// Each node carries a label (its id in the source file). Subgraphs keep the
/// labels of the graph they were cut from, so every report can be written in
/// terms of the ids the user supplied. Immutable after construction.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from an arbitrary edge list. Edges are canonicalised to
  /// u < v, duplicates collapse keeping the last weight. Self-loops, ids out of
  /// range and negative or non-finite weights throw std::invalid_argument.
  /// An empty `labels` means label(i) == i.
  static Graph from_edges(std::size_t node_count, std::vector<Edge> edges,
                          std::vector<NodeLabel> labels = {});

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Edges sorted lexicographically by (u, v).
  std::span<const Edge> edges() const noexcept { return edges_; }

  /// Neighbors of `v`, sorted by node id.
  std::span<const Neighbor> neighbors(NodeId v) const noexcept {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
  double weighted_degree(NodeId v) const noexcept { return strength_[v]; }

  bool has_edge(NodeId a, NodeId b) const noexcept;
  std::optional<double> weight(NodeId a, NodeId b) const noexcept;

  NodeLabel label(NodeId v) const noexcept { return labels_[v]; }
  std::span<const NodeLabel> labels() const noexcept { return labels_; }

  /// Dense id for a label, if present.
  std::optional<NodeId> find_label(NodeLabel label) const;

  /// Number of connected components (isolated nodes count as components).
  std::size_t component_count() const;

  /// Component index per node, numbered in order of first appearance.
  std::vector<std::size_t> components() const;

 private:
  std::vector<NodeLabel> labels_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<double> strength_;
};

/// Induced subgraph plus the mapping back to the graph it was cut from.
struct Subgraph {
  Graph graph;
  std::vector<NodeId> parent_ids;  ///< local id -> parent id
  std::vector<NodeId> local_ids;   ///< parent id -> local id, kNoNode if absent

  NodeId to_parent(NodeId local) const { return parent_ids.at(local); }
  NodeId to_local(NodeId parent) const { return local_ids.at(parent); }
};

/// Induced subgraph on `nodes` (any order; duplicates are ignored). Local ids
/// follow ascending parent id.
Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

struct EdgeListLoad {
  Graph graph;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

/// Reads a whitespace separated edge list ("u v" or "u v w", '#' comments).
/// Labels are mapped to dense ids in order of first appearance.
EdgeListLoad load_edge_list(const std::filesystem::path& path);
EdgeListLoad parse_edge_list(const std::string& text);

/// Writes "u v" lines (or "u v w" when any weight differs from 1) in label space.
std::string format_edge_list(const Graph& g);

}  // namespace corestab

#pragma once

#include <vector>

#include "corestab/graph.hpp"

namespace corestab {

struct CorenessMap {
  std::vector<int> coreness;
  int degeneracy = 0;                  ///< k_max
  std::vector<NodeId> degenerate_core;  ///< nodes with coreness == k_max, ascending

  /// Distinct coreness values present, ascending.
  std::vector<int> distinct_values() const;

  bool in_core(NodeId v) const { return coreness.at(v) == degeneracy; }
};

/// Bucket-based peeling (Batagelj & Zaversnik), O(n + m).
CorenessMap core_decomposition(const Graph& g);

/// Induced subgraph on nodes with coreness >= k. Throws std::out_of_range
/// unless 0 <= k <= k_max.
Subgraph k_core_subgraph(const Graph& g, const CorenessMap& cm, int k);

/// Nodes with coreness >= k, ascending.
std::vector<NodeId> k_core_nodes(const CorenessMap& cm, int k);

struct SubgraphFeatures {
  double size = 0.0;
  double edge_density = 0.0;
  double avg_clustering = 0.0;
  double transitivity = 0.0;
};

SubgraphFeatures subgraph_features(const Graph& g);

/// |E_D| / C(|D|, 2). Throws std::invalid_argument when |D| < 2.
double core_completeness(const Graph& g, const CorenessMap& cm);

}  // namespace corestab

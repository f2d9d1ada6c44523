#include "corestab/kcore.hpp"

#include <algorithm>
#include <stdexcept>

namespace corestab {

std::vector<int> CorenessMap::distinct_values() const {
  std::vector<int> values(coreness.begin(), coreness.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

CorenessMap core_decomposition(const Graph& g) {
  const std::size_t n = g.node_count();
  CorenessMap cm;
  cm.coreness.assign(n, 0);
  if (n == 0) return cm;

  std::vector<std::size_t> deg(n);
  std::size_t max_deg = 0;
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    max_deg = std::max(max_deg, deg[v]);
  }

  // bin[d] = start of degree-d block in `order`; pos[v] = index of v in `order`.
  std::vector<std::size_t> bin(max_deg + 1, 0);
  for (auto d : deg) ++bin[d];
  std::size_t start = 0;
  for (auto& b : bin) {
    auto count = b;
    b = start;
    start += count;
  }
  std::vector<NodeId> order(n);
  std::vector<std::size_t> pos(n);
  for (NodeId v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    order[pos[v]] = v;
  }
  for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  for (std::size_t i = 0; i < n; ++i) {
    NodeId v = order[i];
    for (const auto& nb : g.neighbors(v)) {
      NodeId u = nb.node;
      if (deg[u] > deg[v]) {
        // Swap u with the first node of its degree block, then shrink the block.
        std::size_t du = deg[u];
        std::size_t pu = pos[u];
        std::size_t pw = bin[du];
        NodeId w = order[pw];
        if (u != w) {
          order[pu] = w;
          pos[w] = pu;
          order[pw] = u;
          pos[u] = pw;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }

  for (NodeId v = 0; v < n; ++v) cm.coreness[v] = static_cast<int>(deg[v]);
  cm.degeneracy = *std::max_element(cm.coreness.begin(), cm.coreness.end());
  for (NodeId v = 0; v < n; ++v)
    if (cm.coreness[v] == cm.degeneracy) cm.degenerate_core.push_back(v);
  return cm;
}

std::vector<NodeId> k_core_nodes(const CorenessMap& cm, int k) {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < cm.coreness.size(); ++v)
    if (cm.coreness[v] >= k) nodes.push_back(v);
  return nodes;
}

Subgraph k_core_subgraph(const Graph& g, const CorenessMap& cm, int k) {
  if (cm.coreness.size() != g.node_count())
    throw std::invalid_argument("coreness map does not belong to this graph");
  if (k < 0 || k > cm.degeneracy)
    throw std::out_of_range("k = " + std::to_string(k) + " outside [0, " +
                            std::to_string(cm.degeneracy) + "]");
  auto nodes = k_core_nodes(cm, k);
  return induced_subgraph(g, nodes);
}

SubgraphFeatures subgraph_features(const Graph& g) {
  SubgraphFeatures f;
  const std::size_t n = g.node_count();
  f.size = static_cast<double>(n);
  if (n >= 2) {
    f.edge_density = 2.0 * static_cast<double>(g.edge_count()) /
                     (static_cast<double>(n) * static_cast<double>(n - 1));
  }
  if (n == 0) return f;

  // Triangles per node via sorted-adjacency intersection over forward edges.
  std::vector<double> tri(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    auto nv = g.neighbors(v);
    for (const auto& a : nv) {
      if (a.node <= v) continue;
      auto na = g.neighbors(a.node);
      auto i = nv.begin();
      auto j = na.begin();
      while (i != nv.end() && j != na.end()) {
        if (i->node < j->node) {
          ++i;
        } else if (j->node < i->node) {
          ++j;
        } else {
          NodeId w = i->node;
          if (w > a.node) {
            tri[v] += 1.0;
            tri[a.node] += 1.0;
            tri[w] += 1.0;
          }
          ++i;
          ++j;
        }
      }
    }
  }

  double clustering_sum = 0.0;
  double triangles3 = 0.0;  // 3 * number of triangles
  double triples = 0.0;     // connected triples centred at each node
  for (NodeId v = 0; v < n; ++v) {
    double d = static_cast<double>(g.degree(v));
    double pairs = d * (d - 1.0) / 2.0;
    triples += pairs;
    triangles3 += tri[v];
    if (pairs > 0.0) clustering_sum += tri[v] / pairs;
  }
  f.avg_clustering = clustering_sum / static_cast<double>(n);
  f.transitivity = triples > 0.0 ? triangles3 / triples : 0.0;
  return f;
}

double core_completeness(const Graph& g, const CorenessMap& cm) {
  const auto& core = cm.degenerate_core;
  if (core.size() < 2) throw std::invalid_argument("degenerate core has fewer than 2 nodes");
  auto sub = induced_subgraph(g, core);
  double s = static_cast<double>(core.size());
  return static_cast<double>(sub.graph.edge_count()) / (s * (s - 1.0) / 2.0);
}

}  // namespace corestab

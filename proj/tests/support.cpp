#include "support.hpp"

#include "corestab/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace testing {

using corestab::Edge;
using corestab::NodeId;

Graph clique(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph::from_edges(n, e);
}

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph::from_edges(n, e);
}

Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i) e.push_back({i, static_cast<NodeId>((i + 1) % n)});
  return Graph::from_edges(n, e);
}

Graph star(std::size_t leaves) {
  std::vector<Edge> e;
  for (NodeId i = 1; i <= leaves; ++i) e.push_back({0, i});
  return Graph::from_edges(leaves + 1, e);
}

Graph bridged_cliques() {
  std::vector<Edge> e;
  for (NodeId c = 0; c < 2; ++c)
    for (NodeId i = 0; i < 5; ++i)
      for (NodeId j = i + 1; j < 5; ++j) e.push_back({5 * c + i, 5 * c + j});
  e.push_back({4, 5});
  return Graph::from_edges(10, e);
}

Graph from_pairs(std::size_t n, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> e;
  for (auto [u, v] : pairs) e.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  return Graph::from_edges(n, e);
}

Graph coin_flip_graph(std::size_t n, double p, corestab::Rng& rng) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (rng.uniform() < p) e.push_back({i, j});
  return Graph::from_edges(n, e);
}

std::vector<int> naive_coreness(const Graph& g) {
  const std::size_t n = g.node_count();
  std::vector<int> core(n, 0);
  std::vector<bool> alive(n, true);
  for (int k = 1;; ++k) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (NodeId v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        int deg = 0;
        for (const auto& nb : g.neighbors(v)) deg += alive[nb.node];
        if (deg < k) {
          alive[v] = false;
          changed = true;
        }
      }
    }
    bool any = false;
    for (NodeId v = 0; v < n; ++v) {
      if (alive[v]) {
        core[v] = k;
        any = true;
      }
    }
    if (!any) break;
  }
  return core;
}

std::vector<double> brute_triangles(const Graph& g) {
  std::vector<double> t(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto nb = g.neighbors(v);
    for (std::size_t a = 0; a < nb.size(); ++a)
      for (std::size_t b = a + 1; b < nb.size(); ++b)
        if (g.has_edge(nb[a].node, nb[b].node)) t[v] += 1.0;
  }
  return t;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("corestab_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::map<std::string, std::string> dir_snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
    out[std::filesystem::relative(entry.path(), dir).string()] = corestab::read_file(entry.path());
  }
  return out;
}

double transport_emd(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  const long long na = static_cast<long long>(a.size()), nb = static_cast<long long>(b.size());
  // Nodes: 0 source, 1..na supplies, na+1..na+nb demands, na+nb+1 sink.
  const int n = static_cast<int>(na + nb + 2);
  const int sink = n - 1;
  struct Arc {
    int to;
    long long cap;
    double cost;
    int rev;
  };
  std::vector<std::vector<Arc>> adj(static_cast<std::size_t>(n));
  auto add = [&](int u, int v, long long cap, double cost) {
    adj[u].push_back({v, cap, cost, static_cast<int>(adj[v].size())});
    adj[v].push_back({u, 0, -cost, static_cast<int>(adj[u].size()) - 1});
  };
  for (int i = 0; i < na; ++i) add(0, 1 + i, nb, 0.0);
  for (int j = 0; j < nb; ++j) add(static_cast<int>(1 + na + j), sink, na, 0.0);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) add(1 + i, static_cast<int>(1 + na + j), na * nb, std::fabs(a[i] - b[j]));

  double total = 0.0;
  long long flow = 0;
  const long long need = na * nb;
  while (flow < need) {
    // Bellman-Ford on the residual graph (costs may be negative).
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<int> prev_node(n, -1), prev_arc(n, -1);
    dist[0] = 0.0;
    for (int iter = 0; iter < n; ++iter) {
      bool relaxed = false;
      for (int u = 0; u < n; ++u) {
        if (!std::isfinite(dist[u])) continue;
        for (int k = 0; k < static_cast<int>(adj[u].size()); ++k) {
          const Arc& e = adj[u][k];
          if (e.cap > 0 && dist[u] + e.cost < dist[e.to] - 1e-15) {
            dist[e.to] = dist[u] + e.cost;
            prev_node[e.to] = u;
            prev_arc[e.to] = k;
            relaxed = true;
          }
        }
      }
      if (!relaxed) break;
    }
    if (!std::isfinite(dist[sink])) throw std::logic_error("transport infeasible");
    long long push = need - flow;
    for (int v = sink; v != 0; v = prev_node[v]) push = std::min(push, adj[prev_node[v]][prev_arc[v]].cap);
    for (int v = sink; v != 0; v = prev_node[v]) {
      Arc& e = adj[prev_node[v]][prev_arc[v]];
      e.cap -= push;
      adj[v][e.rev].cap += push;
    }
    flow += push;
    total += static_cast<double>(push) * dist[sink];
  }
  return total / static_cast<double>(need);
}

}  // namespace testing

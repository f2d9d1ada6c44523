#include "corestab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "corestab/error.hpp"

namespace corestab {

Graph Graph::from_edges(std::size_t node_count, std::vector<Edge> edges,
                        std::vector<NodeLabel> labels) {
  if (node_count >= kNoNode) throw std::invalid_argument("graph too large for 32-bit node ids");
  if (labels.empty()) {
    labels.resize(node_count);
    std::iota(labels.begin(), labels.end(), NodeLabel{0});
  } else if (labels.size() != node_count) {
    throw std::invalid_argument("label count does not match node count");
  }

  for (auto& e : edges) {
    if (e.u >= node_count || e.v >= node_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("self-loop on node " + std::to_string(e.u));
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight))
      throw std::invalid_argument("edge weight must be finite and nonnegative");
    if (e.u > e.v) std::swap(e.u, e.v);
  }

  // Stable sort keeps input order among duplicates, so the last one wins.
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  std::vector<Edge> unique;
  unique.reserve(edges.size());
  for (const auto& e : edges) {
    if (!unique.empty() && unique.back().u == e.u && unique.back().v == e.v)
      unique.back().weight = e.weight;
    else
      unique.push_back(e);
  }

  Graph g;
  g.labels_ = std::move(labels);
  g.edges_ = std::move(unique);

  std::vector<std::size_t> deg(node_count, 0);
  for (const auto& e : g.edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  g.offsets_.assign(node_count + 1, 0);
  for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] = g.offsets_[i] + deg[i];
  g.adjacency_.resize(g.offsets_.back());
  g.strength_.assign(node_count, 0.0);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  // Edges are sorted by (u, v), so each adjacency run comes out sorted too.
  for (const auto& e : g.edges_) g.adjacency_[cursor[e.v]++] = {e.u, e.weight};
  for (const auto& e : g.edges_) g.adjacency_[cursor[e.u]++] = {e.v, e.weight};
  for (std::size_t i = 0; i < node_count; ++i) {
    auto first = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]);
    auto last = g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]);
    std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    for (auto it = first; it != last; ++it) g.strength_[i] += it->weight;
  }
  return g;
}

std::optional<double> Graph::weight(NodeId a, NodeId b) const noexcept {
  if (a >= node_count() || b >= node_count()) return std::nullopt;
  if (degree(a) > degree(b)) std::swap(a, b);
  auto nb = neighbors(a);
  auto it = std::lower_bound(nb.begin(), nb.end(), b,
                             [](const Neighbor& n, NodeId id) { return n.node < id; });
  if (it == nb.end() || it->node != b) return std::nullopt;
  return it->weight;
}

bool Graph::has_edge(NodeId a, NodeId b) const noexcept { return weight(a, b).has_value(); }

std::optional<NodeId> Graph::find_label(NodeLabel label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return static_cast<NodeId>(i);
  return std::nullopt;
}

std::vector<std::size_t> Graph::components() const {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(node_count(), unset);
  std::vector<NodeId> stack;
  std::size_t next = 0;
  for (NodeId s = 0; s < node_count(); ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (const auto& nb : neighbors(v)) {
        if (comp[nb.node] == unset) {
          comp[nb.node] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return comp;
}

std::size_t Graph::component_count() const {
  auto comp = components();
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

Subgraph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  Subgraph sub;
  sub.local_ids.assign(g.node_count(), kNoNode);
  std::vector<NodeId> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<NodeLabel> labels;
  labels.reserve(sorted.size());
  for (NodeId v : sorted) {
    if (v >= g.node_count()) throw std::out_of_range("subgraph node out of range");
    sub.local_ids[v] = static_cast<NodeId>(sub.parent_ids.size());
    sub.parent_ids.push_back(v);
    labels.push_back(g.label(v));
  }
  std::vector<Edge> edges;
  for (const auto& e : g.edges()) {
    NodeId a = sub.local_ids[e.u];
    NodeId b = sub.local_ids[e.v];
    if (a != kNoNode && b != kNoNode) edges.push_back({a, b, e.weight});
  }
  sub.graph = Graph::from_edges(sub.parent_ids.size(), std::move(edges), std::move(labels));
  return sub;
}

namespace {

bool parse_label(const std::string& tok, NodeLabel& out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size() || v < 0) return false;
    out = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

EdgeListLoad parse_edge_list(const std::string& text) {
  std::unordered_map<NodeLabel, NodeId> dense;
  std::vector<NodeLabel> labels;
  std::vector<Edge> edges;
  EdgeListLoad out;

  auto intern = [&](NodeLabel label) {
    auto [it, inserted] = dense.try_emplace(label, static_cast<NodeId>(labels.size()));
    if (inserted) labels.push_back(label);
    return it->second;
  };

  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#' || line[first] == '%') continue;
    std::istringstream fields(line);
    std::string a, b, w, extra;
    fields >> a >> b;
    NodeLabel la = 0, lb = 0;
    if (!parse_label(a, la) || !parse_label(b, lb))
      throw ParseError("expected two nonnegative integer ids: '" + line + "'", lineno);
    double weight = 1.0;
    if (fields >> w) {
      std::size_t pos = 0;
      try {
        weight = std::stod(w, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != w.size() || !std::isfinite(weight))
        throw ParseError("malformed weight '" + w + "'", lineno);
      if (weight < 0.0) throw ParseError("negative weight " + w, lineno);
      if (fields >> extra) throw ParseError("trailing fields after weight", lineno);
    }
    NodeId u = intern(la);
    NodeId v = intern(lb);
    if (u == v) {
      ++out.self_loops_dropped;
      continue;
    }
    edges.push_back({u, v, weight});
  }

  const std::size_t raw = edges.size();
  const std::size_t n = labels.size();
  out.graph = Graph::from_edges(n, std::move(edges), std::move(labels));
  out.duplicates_collapsed = raw - out.graph.edge_count();
  return out;
}

EdgeListLoad load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open edge list " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_edge_list(buf.str());
}

std::string format_edge_list(const Graph& g) {
  bool weighted = std::any_of(g.edges().begin(), g.edges().end(),
                              [](const Edge& e) { return e.weight != 1.0; });
  std::ostringstream out;
  out.precision(17);
  for (const auto& e : g.edges()) {
    out << g.label(e.u) << ' ' << g.label(e.v);
    if (weighted) out << ' ' << e.weight;
    out << '\n';
  }
  return out.str();
}

}  // namespace corestab

#include "corestab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corestab/rng.hpp"

namespace corestab {

std::string to_string(GraphModel m) { return m == GraphModel::erdos_renyi ? "er" : "ba"; }

void GenSpec::validate() const {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n > std::size_t{1} << 31) throw std::invalid_argument("n too large");
  if (model == GraphModel::erdos_renyi) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must be in [0, 1]");
  } else if (m_attach < 1 || m_attach >= n) {
    throw std::invalid_argument("m must satisfy 1 <= m < n");
  }
}

namespace {

Graph erdos_renyi(std::size_t n, double p, Rng& rng) {
  std::vector<Edge> edges;
  if (p >= 1.0) {
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph::from_edges(n, std::move(edges));
  }
  if (p <= 0.0) return Graph::from_edges(n, {});
  // Batagelj-Brandes: skip ahead by geometric gaps over the lower triangle.
  const double log_q = std::log1p(-p);
  long long v = 1, w = -1;
  const auto nn = static_cast<long long>(n);
  while (v < nn) {
    const double r = rng.uniform();
    w += 1 + static_cast<long long>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.push_back({static_cast<NodeId>(w), static_cast<NodeId>(v)});
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph barabasi_albert(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<Edge> edges;
  edges.reserve(m * (n - m));
  std::vector<NodeId> targets(m);
  for (std::size_t i = 0; i < m; ++i) targets[i] = static_cast<NodeId>(i);
  std::vector<NodeId> repeated;  // each node once per incident edge
  repeated.reserve(2 * m * (n - m));
  std::vector<NodeId> chosen;
  for (auto source = static_cast<NodeId>(m); source < n; ++source) {
    for (NodeId t : targets) edges.push_back({t, source});
    repeated.insert(repeated.end(), targets.begin(), targets.end());
    repeated.insert(repeated.end(), m, source);
    chosen.clear();
    while (chosen.size() < m) {
      const NodeId c = repeated[rng.below(repeated.size())];
      if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) chosen.push_back(c);
    }
    targets = chosen;
  }
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace

Graph generate(const GenSpec& spec) {
  spec.validate();
  Rng rng(derive_seed(spec.seed, to_string(spec.model)));
  return spec.model == GraphModel::erdos_renyi ? erdos_renyi(spec.n, spec.p, rng)
                                               : barabasi_albert(spec.n, spec.m_attach, rng);
}

nlohmann::json to_json(const GenSpec& spec) {
  nlohmann::json j = {{"model", to_string(spec.model)}, {"n", spec.n}, {"seed", spec.seed}};
  if (spec.model == GraphModel::erdos_renyi)
    j["p"] = spec.p;
  else
    j["m"] = spec.m_attach;
  return j;
}

GenSpec gen_spec_from_json(const nlohmann::json& j) {
  GenSpec s;
  try {
    const std::string model = j.at("model").get<std::string>();
    if (model == "er" || model == "erdos_renyi") {
      s.model = GraphModel::erdos_renyi;
      s.p = j.at("p").get<double>();
    } else if (model == "ba" || model == "barabasi_albert") {
      s.model = GraphModel::barabasi_albert;
      s.m_attach = j.at("m").get<std::size_t>();
    } else {
      throw std::invalid_argument("unknown graph model '" + model + "'");
    }
    s.n = j.at("n").get<std::size_t>();
    s.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad generator spec: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace corestab

#include "corestab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "corestab/io.hpp"
#include "corestab/rng.hpp"
#include "corestab/stable.hpp"

namespace corestab {

namespace {

std::uint64_t pair_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

LinkPredSplit make_split(const Graph& g, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("split fraction must be in (0, 1)");
  const auto edges = g.edges();
  const std::size_t m = edges.size();
  if (m == 0) throw std::invalid_argument("cannot split a graph without edges");
  const auto wanted =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m))));

  Rng rng(derive_seed(seed, "split-edges"));
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = m; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);

  std::vector<std::size_t> degree(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) degree[v] = g.degree(v);
  std::vector<bool> held(m, false);
  LinkPredSplit split;
  split.seed = seed;
  for (std::size_t idx : order) {
    if (split.positives.size() == wanted) break;
    const Edge& e = edges[idx];
    if (degree[e.u] < 2 || degree[e.v] < 2) continue;
    --degree[e.u];
    --degree[e.v];
    held[idx] = true;
    split.positives.emplace_back(e.u, e.v);
  }
  if (split.positives.size() < wanted)
    throw std::runtime_error("only " + std::to_string(split.positives.size()) + " of " + std::to_string(wanted) +
                             " edges can be withheld without isolating a node");

  std::vector<Edge> train;
  train.reserve(m - wanted);
  for (std::size_t e = 0; e < m; ++e)
    if (!held[e]) train.push_back(edges[e]);
  split.train = Graph::from_edges(g.node_count(), std::move(train), {g.labels().begin(), g.labels().end()});

  const std::size_t n = g.node_count();
  const double all_pairs = static_cast<double>(n) * static_cast<double>(n - (n > 0)) / 2.0;
  const double non_edges = all_pairs - static_cast<double>(m);
  if (non_edges < static_cast<double>(wanted))
    throw std::runtime_error("graph has fewer non-edges than held-out edges");

  Rng neg_rng(derive_seed(seed, "split-negatives"));
  if (non_edges <= 4.0 * static_cast<double>(wanted)) {
    // Dense graph: enumerate the non-edges and take a uniform subset.
    std::vector<NodePair> pool;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (!g.has_edge(u, v)) pool.emplace_back(u, v);
    for (std::size_t i = 0; i < wanted; ++i) std::swap(pool[i], pool[i + neg_rng.below(pool.size() - i)]);
    split.negatives.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(wanted));
  } else {
    std::unordered_set<std::uint64_t> seen;
    while (split.negatives.size() < wanted) {
      const auto u = static_cast<NodeId>(neg_rng.below(n));
      const auto v = static_cast<NodeId>(neg_rng.below(n));
      if (u == v || g.has_edge(u, v)) continue;
      if (!seen.insert(pair_key(u, v)).second) continue;
      split.negatives.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  return split;
}

std::vector<double> score_pairs(const EmbeddingMatrix& y, std::span<const NodePair> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [u, v] : pairs) {
    if (u >= y.rows() || v >= y.rows()) throw std::out_of_range("pair references a node outside the embedding");
    const auto a = y.row(u), b = y.row(v);
    const double na = std::sqrt(dot(a, a)), nb = std::sqrt(dot(b, b));
    out.push_back(na > 0.0 && nb > 0.0 ? dot(a, b) / (na * nb) : 0.0);
  }
  return out;
}

double roc_auc(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) throw std::invalid_argument("AUC needs positives and negatives");
  std::vector<std::pair<double, bool>> all;
  all.reserve(pos.size() + neg.size());
  for (double s : pos) all.emplace_back(s, true);
  for (double s : neg) all.emplace_back(s, false);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t t = i; t < j; ++t)
      if (all[t].second) rank_sum += midrank;
    i = j;
  }
  const double np = static_cast<double>(pos.size()), nn = static_cast<double>(neg.size());
  return (rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

EvalScores evaluate_scores(std::span<const double> pos, std::span<const double> neg,
                           std::span<const NodePair> pos_pairs, std::span<const NodePair> neg_pairs) {
  if (pos.empty() || neg.empty()) throw std::invalid_argument("empty test set");
  const bool keyed = pos_pairs.size() == pos.size() && neg_pairs.size() == neg.size();
  struct Item {
    double score;
    std::uint64_t key;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(pos.size() + neg.size());
  for (std::size_t i = 0; i < pos.size(); ++i)
    items.push_back({pos[i], keyed ? pair_key(pos_pairs[i].first, pos_pairs[i].second) : i, true});
  for (std::size_t i = 0; i < neg.size(); ++i)
    items.push_back({neg[i], keyed ? pair_key(neg_pairs[i].first, neg_pairs[i].second) : pos.size() + i, false});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.key < b.key;
  });

  EvalScores s;
  s.positives = pos.size();
  s.negatives = neg.size();
  std::size_t tp = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) tp += items[i].positive;
  // Predicted positives == actual positives, so precision == recall == F1.
  s.f1 = static_cast<double>(tp) / static_cast<double>(pos.size());
  s.threshold = items[pos.size() - 1].score;
  s.auc = roc_auc(pos, neg);
  return s;
}

EvalScores evaluate(const EmbeddingMatrix& y, const LinkPredSplit& split) {
  const auto pos = score_pairs(y, split.positives);
  const auto neg = score_pairs(y, split.negatives);
  return evaluate_scores(pos, neg, split.positives, split.negatives);
}

std::vector<double> stability_error_distribution(const EmbeddingMatrix& y, const EmbeddingMatrix& isolated,
                                                 std::span<const NodeId> core) {
  auto errors = stability_errors(y, isolated, core);
  std::sort(errors.begin(), errors.end());
  return errors;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty list");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

nlohmann::json to_json(const EvalScores& s) {
  return {{"schema_version", kScoresSchemaVersion},
          {"f1", s.f1},
          {"auc", s.auc},
          {"threshold", s.threshold},
          {"positives", s.positives},
          {"negatives", s.negatives},
          {"scored_pairs", "held-out positives and an equal number of sampled non-edges"}};
}

std::string format_result_row(const ResultRow& row) {
  return row.graph + ',' + row.algorithm + ',' + row.variant + ',' + format_double(row.scores.f1) + ',' +
         format_double(row.scores.auc) + '\n';
}

}  // namespace corestab

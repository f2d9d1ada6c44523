#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "corestab/embedding.hpp"
#include "corestab/graph.hpp"

namespace corestab {

using NodePair = std::pair<NodeId, NodeId>;

struct LinkPredSplit {
  Graph train;                     ///< same node ids as the original graph
  std::vector<NodePair> positives;  ///< held-out edges, u < v
  std::vector<NodePair> negatives;  ///< sampled non-edges, u < v
  std::uint64_t seed = 0;
};

/// Withholds round(fraction * m) edges (at least 1) so that no node loses its
/// last edge, and samples as many non-edges uniformly without replacement.
/// Edges whose removal would isolate a node are skipped; throws
/// std::runtime_error when too few removable edges or non-edges remain.
LinkPredSplit make_split(const Graph& g, double fraction, std::uint64_t seed);

/// Cosine similarity per pair; zero-norm rows score 0. Throws std::out_of_range on bad ids.
std::vector<double> score_pairs(const EmbeddingMatrix& y, std::span<const NodePair> pairs);

struct EvalScores {
  double f1 = 0.0;
  double auc = 0.0;
  double threshold = 0.0;  ///< score of the last pair labelled positive
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

/// Labels the top |positives| scored pairs positive (ties broken by ascending
/// pair order) and reports F1 on that labelling, plus the midrank AUC.
/// Throws std::invalid_argument on an empty test set.
EvalScores evaluate_scores(std::span<const double> positive_scores, std::span<const double> negative_scores,
                           std::span<const NodePair> positive_pairs = {}, std::span<const NodePair> negative_pairs = {});

EvalScores evaluate(const EmbeddingMatrix& y, const LinkPredSplit& split);

/// Probability that a random positive outscores a random negative; ties count 0.5.
double roc_auc(std::span<const double> positive_scores, std::span<const double> negative_scores);

/// Per-pair squared proximity differences over the core, sorted ascending.
std::vector<double> stability_error_distribution(const EmbeddingMatrix& y, const EmbeddingMatrix& isolated,
                                                 std::span<const NodeId> core);

double median(std::vector<double> values);

inline constexpr int kScoresSchemaVersion = 1;

struct ResultRow {
  std::string graph;
  std::string algorithm;
  std::string variant;  ///< "original" or "stable"
  EvalScores scores;
};

nlohmann::json to_json(const EvalScores& s);

/// Header for the cumulative results table.
inline constexpr const char* kResultsHeader = "graph,algorithm,variant,f1,auc";
std::string format_result_row(const ResultRow& row);

}  // namespace corestab

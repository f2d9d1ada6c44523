#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "corestab/embedding.hpp"
#include "corestab/graph.hpp"
#include "corestab/kcore.hpp"
#include "corestab/rng.hpp"

namespace corestab {

struct StableConfig {
  Algorithm base = Algorithm::line1;
  double alpha = 10.0;
  double gamma = 0.1;  ///< LE only
  double beta = 0.1;   ///< LE only
  double learning_rate = 0.025;
  int batches = 200;
  int dim = 10;
  int negatives = 5;
  std::uint64_t seed = 0;

  /// Defaults: alpha = 1e5, beta = gamma = 0.1 for LE; alpha = 10 for LINE.
  static StableConfig defaults(Algorithm base);

  void validate() const;

  /// Spec for the base embeddings (isolated core and initialisation).
  EmbedSpec embed_spec(std::uint64_t seed) const;
};

nlohmann::json to_json(const StableConfig& cfg);
/// Starts from defaults(base) and overrides the keys present. Throws
/// std::invalid_argument on unknown keys or invalid values.
StableConfig stable_config_from_json(const nlohmann::json& j);

struct LossPoint {
  int batch = 0;  ///< 1-based
  double base = 0.0;
  double stability = 0.0;
};

struct StableResult {
  EmbeddingMatrix embedding;             ///< Y*
  EmbeddingMatrix initial;               ///< Y before training
  EmbeddingMatrix isolated;              ///< Y_D hat, row a belongs to core[a]
  std::vector<NodeId> core;              ///< degenerate core, ascending
  std::vector<LossPoint> trace;          ///< one entry per batch
  std::size_t augmented_edges = 0;       ///< zero-weight core pairs added
  StableConfig config;
};

/// Base embedding of the induced subgraph on the degenerate core, rows in
/// ascending parent id order (the order of cm.degenerate_core).
/// Throws std::invalid_argument if |D| < 2 or (LE) the core has isolated nodes.
EmbeddingMatrix isolated_core_embedding(const Graph& g, const CorenessMap& cm, const EmbedSpec& spec);

/// |p(u_i,u_j) - p(u^_i,u^_j)|^2 for every unordered core pair, in (a, b) order
/// with a < b; row a of `isolated` belongs to core[a].
std::vector<double> stability_errors(const EmbeddingMatrix& y, const EmbeddingMatrix& isolated,
                                     std::span<const NodeId> core);

/// L_s: sum of stability_errors. Throws std::invalid_argument when
/// isolated.rows() != core.size() or dimensions differ.
double instability_penalty(const EmbeddingMatrix& y, const EmbeddingMatrix& isolated, std::span<const NodeId> core);

/// sigma(x)(1 - sigma(x))(sigma(x) - sigma(x^)) u_j with x = u_i.u_j and
/// x^ = u^_i.u^_j; dL_s/du_i up to the factor 2.
std::vector<double> stability_gradient(std::span<const double> ui, std::span<const double> uj,
                                       std::span<const double> ui_hat, std::span<const double> uj_hat);

/// gamma w (u_i - u_j) + beta (u_i - u_i0); dL_b/du_i for the LE base up to the factor 2.
std::vector<double> le_base_gradient(std::span<const double> ui, std::span<const double> uj,
                                     std::span<const double> ui0, double w, double gamma, double beta);

struct AugmentedGraph {
  Graph graph;
  std::vector<bool> added;  ///< per entry of graph.edges(): zero-weight core pair
  std::size_t added_count = 0;
};

/// Adds every missing core pair as a weight-0 edge. Existing edges keep their weight.
/// Throws std::invalid_argument if |core| < 2.
AugmentedGraph degenerate_clique_augment(const Graph& g, std::span<const NodeId> core);

/// Per-edge update rule of STABLE over a fixed original graph and core.
class StableTrainer {
 public:
  StableTrainer(const Graph& g, std::vector<NodeId> core, const StableConfig& cfg, EmbeddingMatrix initial,
                EmbeddingMatrix isolated);

  /// Applies the update for one drawn edge: the base step when w > 0, the
  /// stability step (scaled by alpha) when both endpoints are in the core.
  void update(const Edge& e, double learning_rate, Rng& rng);

  /// Full base loss: LINE line_sampled_loss; LE gamma sum w |u_i - u_j|^2 + beta |Y - Y0|^2.
  double base_loss() const;
  /// Full instability penalty over all core pairs.
  double stability_loss() const;

  const EmbeddingMatrix& embedding() const noexcept { return y_; }
  EmbeddingMatrix release() { return std::move(y_); }

 private:
  const Graph& g_;
  std::vector<NodeId> core_;
  std::vector<NodeId> core_index_;  ///< parent id -> row of isolated_, kNoNode if outside
  StableConfig cfg_;
  EmbeddingMatrix y_;
  EmbeddingMatrix y0_;
  EmbeddingMatrix isolated_;
  AliasTable negative_table_;
  std::vector<double> gi_, gj_;
};

/// STABLE training. Seeds: "isolated", "init" and "train" derived from cfg.seed.
/// Each batch draws |E_aug| edges uniformly with replacement; the learning
/// rate decays linearly to 0. Throws DivergenceError (0-based batch) when a
/// loss turns non-finite, std::invalid_argument if |D| < 2.
StableResult stable_train(const Graph& g, const StableConfig& cfg);

/// batch,L_b,L_s
std::string format_loss_trace_csv(const std::vector<LossPoint>& trace);

}  // namespace corestab

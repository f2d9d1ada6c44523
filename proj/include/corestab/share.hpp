#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "corestab/embedding.hpp"
#include "corestab/graph.hpp"
#include "corestab/kcore.hpp"

namespace corestab {

enum class DistanceMetric { euclidean, cosine };

std::string to_string(DistanceMetric m);
DistanceMetric parse_metric(const std::string& tag);

/// Sorted pairwise distances among a node set (the D_k of a SHARE step).
struct PairwiseDistribution {
  int k = 0;
  std::vector<double> distances;

  double mean() const;
};

/// Distances over all unordered pairs of `core` rows of `y`, sorted ascending.
/// Throws std::invalid_argument if |core| < 2, std::out_of_range on bad ids.
PairwiseDistribution pairwise_distribution(const EmbeddingMatrix& y, std::span<const NodeId> core,
                                           DistanceMetric metric = DistanceMetric::euclidean);

/// Wasserstein-1 distance between two empirical distributions given as sorted
/// samples with uniform weights: the exact integral of |F_a - F_b| over the
/// merged breakpoints. Throws std::invalid_argument on empty input.
double emd_1d(std::span<const double> a, std::span<const double> b);
double emd_1d(const PairwiseDistribution& a, const PairwiseDistribution& b);

struct ShareRecord {
  int k = 0;
  double emd = 0.0;
  std::optional<double> delta;  ///< absent for the k = 0 record
  double mean_distance = 0.0;   ///< mean of D_k
  std::size_t subgraph_nodes = 0;
  std::size_t subgraph_edges = 0;
  SubgraphFeatures features;
};

inline constexpr int kShareSchemaVersion = 1;

struct ShareReport {
  int schema_version = kShareSchemaVersion;
  std::string dataset;
  std::string embedder;  ///< algorithm tag, or "external"
  int dim = 0;
  std::uint64_t seed = 0;
  DistanceMetric metric = DistanceMetric::euclidean;
  nlohmann::json embedder_config = nlohmann::json::object();
  std::size_t core_size = 0;
  int degeneracy = 0;
  std::vector<ShareRecord> records;
  /// Set when the run stopped early; records up to the failure are kept.
  std::optional<int> failed_k;
  std::string failure;

  bool partial() const { return failed_k.has_value(); }
};

/// Embeds the k-core `kcore` (local ids); `seed` is the per-k derived seed.
using KCoreEmbedFn = std::function<EmbeddingMatrix(int k, const Graph& kcore, std::uint64_t seed)>;

struct ShareOptions {
  DistanceMetric metric = DistanceMetric::euclidean;
  std::string dataset;
  /// Worker threads for the per-k embeddings; 0 means COREstab_THREADS or hardware.
  unsigned threads = 0;
  /// Called once per processed k, in ascending k order, with D_k.
  std::function<void(const PairwiseDistribution&)> on_distribution;
};

/// Shell values processed by SHARE: 0 followed by every distinct coreness value
/// >= 1. When the degenerate core is the whole graph only k = 0 is kept, since
/// the full graph already is the isolated core.
std::vector<int> share_shells(const CorenessMap& cm);

/// Per-k seed: derive_seed(base, k).
std::uint64_t share_seed(std::uint64_t base, int k);

/// SHARE: embed every shell's k-core, measure the degenerate-core pairwise
/// distribution, EMD to D_0, and instability Delta_k. If the embedder throws at
/// some k the report is returned partial, with failed_k set.
/// Throws std::invalid_argument if |D| < 2.
ShareReport run_share(const Graph& g, const KCoreEmbedFn& embed, std::uint64_t seed,
                      const ShareOptions& options = {});

ShareReport run_share(const Graph& g, const EmbedSpec& spec, std::uint64_t seed,
                      const ShareOptions& options = {});

/// Shell with the largest Delta_k (ties toward smaller k).
/// Throws std::invalid_argument with fewer than 2 records.
int max_instability_shell(const ShareReport& report);

/// max_k EMD(D_k, D_0) <= fraction * mean(D_0).
bool share_is_stable(const ShareReport& report, double fraction = 0.1);

nlohmann::json to_json(const ShareReport& report);
ShareReport share_report_from_json(const nlohmann::json& j);

/// Flat CSV: k,emd,delta,size,density,clustering,transitivity.
std::string format_share_csv(const ShareReport& report);

/// Worker count from COREstab_THREADS, else hardware concurrency (>= 1).
unsigned default_thread_count();

}  // namespace corestab

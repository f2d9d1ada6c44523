#include "corestab/share.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "corestab/io.hpp"
#include "corestab/rng.hpp"

namespace corestab {

std::string to_string(DistanceMetric m) {
  return m == DistanceMetric::euclidean ? "euclidean" : "cosine";
}

DistanceMetric parse_metric(const std::string& tag) {
  if (tag == "euclidean") return DistanceMetric::euclidean;
  if (tag == "cosine") return DistanceMetric::cosine;
  throw std::invalid_argument("unknown distance metric '" + tag + "'");
}

double PairwiseDistribution::mean() const {
  if (distances.empty()) return 0.0;
  double s = 0.0;
  for (double x : distances) s += x;
  return s / static_cast<double>(distances.size());
}

PairwiseDistribution pairwise_distribution(const EmbeddingMatrix& y, std::span<const NodeId> core,
                                           DistanceMetric metric) {
  if (core.size() < 2) throw std::invalid_argument("pairwise distribution needs at least 2 nodes");
  for (NodeId v : core)
    if (v >= y.rows()) throw std::out_of_range("core node " + std::to_string(v) + " is not an embedding row");

  std::vector<double> norms;
  if (metric == DistanceMetric::cosine) {
    norms.reserve(core.size());
    for (NodeId v : core) norms.push_back(std::sqrt(dot(y.row(v), y.row(v))));
  }

  PairwiseDistribution out;
  out.distances.reserve(core.size() * (core.size() - 1) / 2);
  const std::size_t d = y.dims();
  for (std::size_t a = 0; a < core.size(); ++a) {
    auto ra = y.row(core[a]);
    for (std::size_t b = a + 1; b < core.size(); ++b) {
      auto rb = y.row(core[b]);
      if (metric == DistanceMetric::euclidean) {
        double s = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
          const double diff = ra[t] - rb[t];
          s += diff * diff;
        }
        out.distances.push_back(std::sqrt(s));
      } else {
        const double denom = norms[a] * norms[b];
        const double cos = denom > 0.0 ? dot(ra, rb) / denom : 0.0;
        out.distances.push_back(std::max(0.0, 1.0 - cos));
      }
    }
  }
  std::sort(out.distances.begin(), out.distances.end());
  return out;
}

double emd_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("EMD of an empty distribution");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  // Walk the merged breakpoints; between consecutive ones the CDF gap is
  // |ia/na - ib/nb|, kept as the integer |ia*nb - ib*na| to avoid drift.
  std::size_t ia = 0, ib = 0;
  double x = std::min(a[0], b[0]);
  long double total = 0.0L;
  while (ia < a.size() || ib < b.size()) {
    double next;
    if (ib == b.size() || (ia < a.size() && a[ia] <= b[ib])) {
      next = a[ia];
    } else {
      next = b[ib];
    }
    const long double gap = std::fabs(static_cast<long double>(ia) * nb - static_cast<long double>(ib) * na);
    total += gap * (static_cast<long double>(next) - static_cast<long double>(x));
    x = next;
    while (ia < a.size() && a[ia] == x) ++ia;
    while (ib < b.size() && b[ib] == x) ++ib;
  }
  return static_cast<double>(total / (static_cast<long double>(na) * nb));
}

double emd_1d(const PairwiseDistribution& a, const PairwiseDistribution& b) {
  return emd_1d(a.distances, b.distances);
}

std::vector<int> share_shells(const CorenessMap& cm) {
  std::vector<int> ks{0};
  if (cm.degenerate_core.size() == cm.coreness.size()) return ks;
  for (int c : cm.distinct_values())
    if (c >= 1) ks.push_back(c);
  return ks;
}

std::uint64_t share_seed(std::uint64_t base, int k) {
  return derive_seed(base, static_cast<std::uint64_t>(k));
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("COREstab_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ShareReport run_share(const Graph& g, const KCoreEmbedFn& embed, std::uint64_t seed,
                      const ShareOptions& options) {
  const CorenessMap cm = core_decomposition(g);
  if (cm.degenerate_core.size() < 2) throw std::invalid_argument("degenerate core has fewer than 2 nodes");

  ShareReport report;
  report.dataset = options.dataset;
  report.seed = seed;
  report.metric = options.metric;
  report.core_size = cm.degenerate_core.size();
  report.degeneracy = cm.degeneracy;

  const std::vector<int> ks = share_shells(cm);
  const std::size_t count = ks.size();

  struct Slot {
    Subgraph sub;
    EmbeddingMatrix y;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(count);

  unsigned threads = options.threads ? options.threads : default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < count;) {
      Slot& slot = slots[t];
      try {
        slot.sub = k_core_subgraph(g, cm, ks[t]);
        slot.y = embed(ks[t], slot.sub.graph, share_seed(seed, ks[t]));
        if (slot.y.rows() != slot.sub.graph.node_count())
          throw std::runtime_error("embedding has " + std::to_string(slot.y.rows()) + " rows for a " +
                                   std::to_string(slot.sub.graph.node_count()) + "-node k-core");
        if (!slot.y.all_finite()) throw std::runtime_error("embedding contains non-finite values");
      } catch (...) {
        slot.error = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  PairwiseDistribution d0;
  double prev_emd = 0.0;
  for (std::size_t t = 0; t < count; ++t) {
    Slot& slot = slots[t];
    if (slot.error) {
      report.failed_k = ks[t];
      try {
        std::rethrow_exception(slot.error);
      } catch (const std::exception& e) {
        report.failure = e.what();
      } catch (...) {
        report.failure = "unknown error";
      }
      break;
    }
    std::vector<NodeId> core_local;
    core_local.reserve(cm.degenerate_core.size());
    for (NodeId v : cm.degenerate_core) core_local.push_back(slot.sub.to_local(v));
    PairwiseDistribution dk = pairwise_distribution(slot.y, core_local, options.metric);
    dk.k = ks[t];

    ShareRecord rec;
    rec.k = ks[t];
    rec.subgraph_nodes = slot.sub.graph.node_count();
    rec.subgraph_edges = slot.sub.graph.edge_count();
    rec.features = subgraph_features(slot.sub.graph);
    rec.mean_distance = dk.mean();
    if (t == 0) {
      rec.emd = 0.0;
    } else {
      rec.emd = emd_1d(dk, d0);
      rec.delta = rec.emd - prev_emd;
    }
    prev_emd = rec.emd;
    report.records.push_back(rec);
    if (options.on_distribution) options.on_distribution(dk);
    if (t == 0) d0 = std::move(dk);
    slot.y = EmbeddingMatrix();
    slot.sub = Subgraph();
  }
  return report;
}

ShareReport run_share(const Graph& g, const EmbedSpec& spec, std::uint64_t seed, const ShareOptions& options) {
  spec.validate();
  auto embedder = make_embedder(spec);
  ShareReport report = run_share(
      g, [&](int, const Graph& kcore, std::uint64_t s) { return embedder->embed(kcore, s); }, seed, options);
  report.embedder = to_string(spec.algorithm);
  report.dim = spec.dim;
  report.embedder_config = {{"algorithm", to_string(spec.algorithm)}, {"dim", spec.dim}};
  if (spec.algorithm == Algorithm::line1) {
    report.embedder_config["batches"] = spec.batches;
    report.embedder_config["negatives"] = spec.negatives;
    report.embedder_config["learning_rate"] = spec.learning_rate;
  }
  return report;
}

int max_instability_shell(const ShareReport& report) {
  if (report.records.size() < 2) throw std::invalid_argument("need at least 2 SHARE records");
  int best_k = 0;
  double best = 0.0;
  bool found = false;
  for (const auto& r : report.records) {
    if (!r.delta) continue;
    if (!found || *r.delta > best) {
      best = *r.delta;
      best_k = r.k;
      found = true;
    }
  }
  return best_k;
}

bool share_is_stable(const ShareReport& report, double fraction) {
  if (report.records.empty()) return false;
  double worst = 0.0;
  for (const auto& r : report.records) worst = std::max(worst, r.emd);
  return worst <= fraction * report.records.front().mean_distance;
}

nlohmann::json to_json(const ShareReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) {
    records.push_back({{"k", r.k},
                       {"emd", r.emd},
                       {"delta", r.delta ? nlohmann::json(*r.delta) : nlohmann::json(nullptr)},
                       {"mean_distance", r.mean_distance},
                       {"nodes", r.subgraph_nodes},
                       {"edges", r.subgraph_edges},
                       {"size", r.features.size},
                       {"density", r.features.edge_density},
                       {"clustering", r.features.avg_clustering},
                       {"transitivity", r.features.transitivity}});
  }
  nlohmann::json j = {{"schema_version", report.schema_version},
                      {"dataset", report.dataset},
                      {"embedder", report.embedder},
                      {"dim", report.dim},
                      {"seed", report.seed},
                      {"metric", to_string(report.metric)},
                      {"embedder_config", report.embedder_config},
                      {"core_size", report.core_size},
                      {"degeneracy", report.degeneracy},
                      {"partial", report.partial()},
                      {"records", records}};
  if (report.failed_k) {
    j["failed_k"] = *report.failed_k;
    j["failure"] = report.failure;
  }
  return j;
}

ShareReport share_report_from_json(const nlohmann::json& j) {
  ShareReport r;
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kShareSchemaVersion)
    throw std::invalid_argument("unsupported SHARE report schema " + std::to_string(r.schema_version));
  r.dataset = j.value("dataset", "");
  r.embedder = j.value("embedder", "");
  r.dim = j.value("dim", 0);
  r.seed = j.value("seed", std::uint64_t{0});
  r.metric = parse_metric(j.value("metric", "euclidean"));
  r.embedder_config = j.value("embedder_config", nlohmann::json::object());
  r.core_size = j.value("core_size", std::size_t{0});
  r.degeneracy = j.value("degeneracy", 0);
  for (const auto& e : j.at("records")) {
    ShareRecord rec;
    rec.k = e.at("k").get<int>();
    rec.emd = e.at("emd").get<double>();
    if (!e.at("delta").is_null()) rec.delta = e.at("delta").get<double>();
    rec.mean_distance = e.value("mean_distance", 0.0);
    rec.subgraph_nodes = e.value("nodes", std::size_t{0});
    rec.subgraph_edges = e.value("edges", std::size_t{0});
    rec.features.size = e.at("size").get<double>();
    rec.features.edge_density = e.at("density").get<double>();
    rec.features.avg_clustering = e.at("clustering").get<double>();
    rec.features.transitivity = e.at("transitivity").get<double>();
    r.records.push_back(rec);
  }
  if (j.contains("failed_k")) {
    r.failed_k = j.at("failed_k").get<int>();
    r.failure = j.value("failure", "");
  }
  return r;
}

std::string format_share_csv(const ShareReport& report) {
  std::string out = "k,emd,delta,size,density,clustering,transitivity\n";
  for (const auto& r : report.records) {
    out += std::to_string(r.k) + ',' + format_double(r.emd) + ',' + (r.delta ? format_double(*r.delta) : "") + ',' +
           format_double(r.features.size) + ',' + format_double(r.features.edge_density) + ',' +
           format_double(r.features.avg_clustering) + ',' + format_double(r.features.transitivity) + '\n';
  }
  return out;
}

}  // namespace corestab

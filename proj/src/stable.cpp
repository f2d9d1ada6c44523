#include "corestab/stable.hpp"

#include <cmath>
#include <stdexcept>

#include "corestab/error.hpp"
#include "corestab/io.hpp"

namespace corestab {

StableConfig StableConfig::defaults(Algorithm base) {
  StableConfig cfg;
  cfg.base = base;
  cfg.alpha = base == Algorithm::laplacian_eigenmaps ? 1e5 : 10.0;
  return cfg;
}

void StableConfig::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
  if (batches < 1) throw std::invalid_argument("batch count must be >= 1");
  if (dim < 1) throw std::invalid_argument("embedding dimension must be >= 1");
  if (base == Algorithm::laplacian_eigenmaps) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  } else if (negatives < 1) {
    throw std::invalid_argument("negatives per edge must be >= 1");
  }
}

EmbedSpec StableConfig::embed_spec(std::uint64_t s) const {
  EmbedSpec spec;
  spec.algorithm = base;
  spec.dim = dim;
  spec.seed = s;
  spec.batches = batches;
  spec.negatives = negatives;
  spec.learning_rate = learning_rate;
  return spec;
}

nlohmann::json to_json(const StableConfig& cfg) {
  nlohmann::json j = {{"base", to_string(cfg.base)},
                      {"alpha", cfg.alpha},
                      {"learning_rate", cfg.learning_rate},
                      {"batches", cfg.batches},
                      {"dim", cfg.dim},
                      {"seed", cfg.seed}};
  if (cfg.base == Algorithm::laplacian_eigenmaps) {
    j["gamma"] = cfg.gamma;
    j["beta"] = cfg.beta;
  } else {
    j["negatives"] = cfg.negatives;
  }
  return j;
}

StableConfig stable_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("STABLE config must be a JSON object");
  StableConfig cfg = StableConfig::defaults(parse_algorithm(j.value("base", std::string("line1"))));
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "base") continue;
      if (key == "alpha") cfg.alpha = value.get<double>();
      else if (key == "gamma") cfg.gamma = value.get<double>();
      else if (key == "beta") cfg.beta = value.get<double>();
      else if (key == "learning_rate") cfg.learning_rate = value.get<double>();
      else if (key == "batches") cfg.batches = value.get<int>();
      else if (key == "dim") cfg.dim = value.get<int>();
      else if (key == "negatives") cfg.negatives = value.get<int>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else throw std::invalid_argument("unknown STABLE config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad STABLE config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

EmbeddingMatrix isolated_core_embedding(const Graph& g, const CorenessMap& cm, const EmbedSpec& spec) {
  if (cm.degenerate_core.size() < 2) throw std::invalid_argument("degenerate core has fewer than 2 nodes");
  const Subgraph sub = induced_subgraph(g, cm.degenerate_core);
  return base_embed(sub.graph, spec);
}

namespace {

void check_mapping(const EmbeddingMatrix& y, const EmbeddingMatrix& isolated, std::span<const NodeId> core) {
  if (isolated.rows() != core.size()) throw std::invalid_argument("isolated embedding rows do not match the core");
  if (isolated.dims() != y.dims()) throw std::invalid_argument("embedding dimension mismatch");
  for (NodeId v : core)
    if (v >= y.rows()) throw std::invalid_argument("core node outside the embedding");
}

}  // namespace

std::vector<double> stability_errors(const EmbeddingMatrix& y, const EmbeddingMatrix& isolated,
                                     std::span<const NodeId> core) {
  check_mapping(y, isolated, core);
  std::vector<double> out;
  out.reserve(core.size() * (core.size() - 1) / 2);
  for (std::size_t a = 0; a < core.size(); ++a) {
    for (std::size_t b = a + 1; b < core.size(); ++b) {
      const double p = sigmoid(dot(y.row(core[a]), y.row(core[b])));
      const double q = sigmoid(dot(isolated.row(a), isolated.row(b)));
      out.push_back((p - q) * (p - q));
    }
  }
  return out;
}

double instability_penalty(const EmbeddingMatrix& y, const EmbeddingMatrix& isolated, std::span<const NodeId> core) {
  double s = 0.0;
  for (double e : stability_errors(y, isolated, core)) s += e;
  return s;
}

std::vector<double> stability_gradient(std::span<const double> ui, std::span<const double> uj,
                                       std::span<const double> ui_hat, std::span<const double> uj_hat) {
  if (ui.size() != uj.size() || ui_hat.size() != uj_hat.size() || ui.size() != ui_hat.size())
    throw std::invalid_argument("embedding dimension mismatch");
  const double s = sigmoid(dot(ui, uj));
  const double c = s * (1.0 - s) * (s - sigmoid(dot(ui_hat, uj_hat)));
  std::vector<double> g(ui.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = c * uj[k];
  return g;
}

std::vector<double> le_base_gradient(std::span<const double> ui, std::span<const double> uj,
                                     std::span<const double> ui0, double w, double gamma, double beta) {
  if (ui.size() != uj.size() || ui.size() != ui0.size()) throw std::invalid_argument("embedding dimension mismatch");
  std::vector<double> g(ui.size());
  for (std::size_t k = 0; k < g.size(); ++k) g[k] = gamma * w * (ui[k] - uj[k]) + beta * (ui[k] - ui0[k]);
  return g;
}

AugmentedGraph degenerate_clique_augment(const Graph& g, std::span<const NodeId> core) {
  if (core.size() < 2) throw std::invalid_argument("augmentation needs at least 2 core nodes");
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  std::size_t added = 0;
  for (std::size_t a = 0; a < core.size(); ++a) {
    for (std::size_t b = a + 1; b < core.size(); ++b) {
      if (core[a] == core[b] || g.has_edge(core[a], core[b])) continue;
      edges.push_back({std::min(core[a], core[b]), std::max(core[a], core[b]), 0.0});
      ++added;
    }
  }
  AugmentedGraph out;
  out.graph = Graph::from_edges(g.node_count(), std::move(edges), {g.labels().begin(), g.labels().end()});
  out.added.reserve(out.graph.edge_count());
  for (const auto& e : out.graph.edges()) out.added.push_back(e.weight == 0.0 && !g.has_edge(e.u, e.v));
  out.added_count = added;
  return out;
}

StableTrainer::StableTrainer(const Graph& g, std::vector<NodeId> core, const StableConfig& cfg,
                             EmbeddingMatrix initial, EmbeddingMatrix isolated)
    : g_(g), core_(std::move(core)), cfg_(cfg), y_(std::move(initial)), isolated_(std::move(isolated)) {
  cfg_.validate();
  if (y_.rows() != g.node_count()) throw std::invalid_argument("initial embedding rows do not match the graph");
  check_mapping(y_, isolated_, core_);
  y0_ = y_;
  core_index_.assign(g.node_count(), kNoNode);
  for (std::size_t a = 0; a < core_.size(); ++a) core_index_[core_[a]] = static_cast<NodeId>(a);
  if (cfg_.base == Algorithm::line1) negative_table_ = make_negative_table(g);
  gi_.resize(y_.dims());
  gj_.resize(y_.dims());
}

void StableTrainer::update(const Edge& e, double learning_rate, Rng& rng) {
  const std::size_t d = y_.dims();
  if (e.weight > 0.0) {
    if (cfg_.base == Algorithm::line1) {
      const bool flip = rng.coin();
      line_sgd_step(y_, flip ? e.v : e.u, flip ? e.u : e.v, negative_table_, cfg_.negatives, learning_rate, rng,
                    e.weight);
    } else {
      auto ui = y_.row(e.u), uj = y_.row(e.v);
      auto ui0 = y0_.row(e.u), uj0 = y0_.row(e.v);
      const double gw = cfg_.gamma * e.weight;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = ui[k] - uj[k];
        gi_[k] = gw * diff + cfg_.beta * (ui[k] - ui0[k]);
        gj_[k] = -gw * diff + cfg_.beta * (uj[k] - uj0[k]);
      }
      for (std::size_t k = 0; k < d; ++k) {
        ui[k] -= learning_rate * gi_[k];
        uj[k] -= learning_rate * gj_[k];
      }
    }
  }
  if (cfg_.alpha > 0.0) {
    const NodeId a = core_index_[e.u], b = core_index_[e.v];
    if (a == kNoNode || b == kNoNode) return;
    auto ui = y_.row(e.u), uj = y_.row(e.v);
    const double s = clipped_sigmoid(dot(ui, uj));
    const double target = sigmoid(dot(isolated_.row(a), isolated_.row(b)));
    const double c = learning_rate * cfg_.alpha * s * (1.0 - s) * (s - target);
    for (std::size_t k = 0; k < d; ++k) {
      const double old_i = ui[k];
      ui[k] -= c * uj[k];
      uj[k] -= c * old_i;
    }
  }
}

double StableTrainer::base_loss() const {
  if (cfg_.base == Algorithm::line1) return line_sampled_loss(g_, y_, cfg_.negatives);
  double f = 0.0;
  for (const auto& e : g_.edges()) {
    auto ui = y_.row(e.u), uj = y_.row(e.v);
    double s = 0.0;
    for (std::size_t k = 0; k < ui.size(); ++k) s += (ui[k] - uj[k]) * (ui[k] - uj[k]);
    f += e.weight * s;
  }
  double dev = 0.0;
  auto a = y_.values(), b = y0_.values();
  for (std::size_t t = 0; t < a.size(); ++t) dev += (a[t] - b[t]) * (a[t] - b[t]);
  return cfg_.gamma * f + cfg_.beta * dev;
}

double StableTrainer::stability_loss() const { return instability_penalty(y_, isolated_, core_); }

StableResult stable_train(const Graph& g, const StableConfig& cfg) {
  cfg.validate();
  const CorenessMap cm = core_decomposition(g);
  if (cm.degenerate_core.size() < 2) throw std::invalid_argument("degenerate core has fewer than 2 nodes");

  StableResult result;
  result.config = cfg;
  result.core = cm.degenerate_core;
  result.isolated = isolated_core_embedding(g, cm, cfg.embed_spec(derive_seed(cfg.seed, "isolated")));
  result.initial = base_embed(g, cfg.embed_spec(derive_seed(cfg.seed, "init")));

  const AugmentedGraph aug = degenerate_clique_augment(g, result.core);
  result.augmented_edges = aug.added_count;
  StableTrainer trainer(g, result.core, cfg, result.initial, result.isolated);

  const auto edges = aug.graph.edges();
  Rng rng(derive_seed(cfg.seed, "train"));
  const auto batches = static_cast<std::size_t>(cfg.batches);
  result.trace.reserve(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const double lr = linear_decay(cfg.learning_rate, b, batches);
    for (std::size_t s = 0; s < edges.size(); ++s) trainer.update(edges[rng.below(edges.size())], lr, rng);
    LossPoint p;
    p.batch = static_cast<int>(b + 1);
    p.base = trainer.base_loss();
    p.stability = trainer.stability_loss();
    if (!std::isfinite(p.base) || !std::isfinite(p.stability) || !trainer.embedding().all_finite())
      throw DivergenceError("STABLE training diverged", b);
    result.trace.push_back(p);
  }
  result.embedding = trainer.release();
  return result;
}

std::string format_loss_trace_csv(const std::vector<LossPoint>& trace) {
  std::string out = "batch,L_b,L_s\n";
  for (const auto& p : trace)
    out += std::to_string(p.batch) + ',' + format_double(p.base) + ',' + format_double(p.stability) + '\n';
  return out;
}

}  // namespace corestab

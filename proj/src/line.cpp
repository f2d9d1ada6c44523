#include <cmath>
#include <stdexcept>

#include "corestab/embedding.hpp"
#include "corestab/error.hpp"
#include "corestab/rng.hpp"

namespace corestab {

namespace {

void require_same_dims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("embedding dimension mismatch");
}

}  // namespace

double line_edge_loss(std::span<const double> ui, std::span<const double> uj,
                      const std::vector<std::span<const double>>& negatives) {
  require_same_dims(ui, uj);
  double loss = -log_sigmoid(dot(ui, uj));
  for (const auto& un : negatives) {
    require_same_dims(ui, un);
    loss -= log_sigmoid(-dot(ui, un));
  }
  return loss;
}

LineGradients line_edge_gradients(std::span<const double> ui, std::span<const double> uj,
                                  const std::vector<std::span<const double>>& negatives) {
  require_same_dims(ui, uj);
  const std::size_t d = ui.size();
  LineGradients g;
  g.source.assign(d, 0.0);
  g.target.assign(d, 0.0);
  const double pos = 1.0 - sigmoid(dot(ui, uj));
  for (std::size_t k = 0; k < d; ++k) {
    g.source[k] = -pos * uj[k];
    g.target[k] = -pos * ui[k];
  }
  for (const auto& un : negatives) {
    require_same_dims(ui, un);
    const double s = sigmoid(dot(ui, un));
    std::vector<double> gn(d);
    for (std::size_t k = 0; k < d; ++k) {
      g.source[k] += s * un[k];
      gn[k] = s * ui[k];
    }
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

AliasTable::AliasTable(std::span<const double> weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("alias table needs at least one weight");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("alias weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("alias weights sum to zero");

  prob_.resize(n);
  alias_.resize(n);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    std::size_t s = small.back();
    small.pop_back();
    std::size_t l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (auto i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (auto i : small) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

AliasTable make_negative_table(const Graph& g) {
  std::vector<double> w(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) w[v] = std::pow(g.weighted_degree(v), 0.75);
  return AliasTable(w);
}

EmbeddingMatrix line_initialization(std::size_t n, int d, std::uint64_t seed) {
  EmbeddingMatrix y(n, static_cast<std::size_t>(d));
  Rng rng(seed);
  const double half = 0.5 / d;
  for (double& x : y.values()) x = rng.uniform(-half, half);
  return y;
}

void line_sgd_step(EmbeddingMatrix& y, NodeId i, NodeId j, const AliasTable& negative_table,
                   int negatives, double learning_rate, Rng& rng, double scale) {
  const std::size_t d = y.dims();
  auto ui = y.row(i);
  auto uj = y.row(j);
  // Accumulated -dL/du_i; u_i is written once the negatives are done.
  thread_local std::vector<double> err;
  err.assign(d, 0.0);

  const double step = learning_rate * scale;
  const double g_pos = (1.0 - clipped_sigmoid(dot(ui, uj))) * step;
  for (std::size_t k = 0; k < d; ++k) {
    err[k] += g_pos * uj[k];
    uj[k] += g_pos * ui[k];
  }
  for (int s = 0; s < negatives; ++s) {
    const auto neg = static_cast<NodeId>(negative_table.sample(rng));
    if (neg == i || neg == j) continue;
    auto un = y.row(neg);
    const double g_neg = -clipped_sigmoid(dot(ui, un)) * step;
    for (std::size_t k = 0; k < d; ++k) {
      err[k] += g_neg * un[k];
      un[k] += g_neg * ui[k];
    }
  }
  for (std::size_t k = 0; k < d; ++k) ui[k] += err[k];
}

EmbeddingMatrix line1_embed(const Graph& g, const EmbedSpec& spec) {
  spec.validate();
  if (g.edge_count() == 0) throw std::invalid_argument("LINE needs at least one edge");

  const auto edges = g.edges();
  std::vector<double> weights(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) weights[e] = edges[e].weight;
  const AliasTable edge_table(weights);
  const AliasTable negative_table = make_negative_table(g);

  EmbeddingMatrix y = line_initialization(g.node_count(), spec.dim, derive_seed(spec.seed, "line-init"));
  Rng rng(derive_seed(spec.seed, "line-sgd"));
  const auto batches = static_cast<std::size_t>(spec.batches);
  for (std::size_t b = 0; b < batches; ++b) {
    const double lr = linear_decay(spec.learning_rate, b, batches);
    for (std::size_t s = 0; s < edges.size(); ++s) {
      const Edge& e = edges[edge_table.sample(rng)];
      // Random orientation: the source endpoint receives the negative terms.
      const bool flip = rng.coin();
      line_sgd_step(y, flip ? e.v : e.u, flip ? e.u : e.v, negative_table, spec.negatives, lr, rng);
    }
  }
  if (!y.all_finite()) throw NumericalError("LINE produced non-finite embeddings");
  return y;
}

double line_base_loss(const Graph& g, const EmbeddingMatrix& y) {
  double loss = 0.0;
  for (const auto& e : g.edges()) loss -= e.weight * log_sigmoid(dot(y.row(e.u), y.row(e.v)));
  return loss;
}

double line_sampled_loss(const Graph& g, const EmbeddingMatrix& y, int negatives) {
  const std::size_t n = g.node_count();
  std::vector<double> pn(n);
  double total = 0.0;
  for (NodeId v = 0; v < n; ++v) total += pn[v] = std::pow(g.weighted_degree(v), 0.75);
  if (total <= 0.0) return 0.0;
  for (double& p : pn) p /= total;

  // noise[i] = sum over all j' of P_n(j') log sigma(-u_i.u_j'); endpoints are removed per edge.
  std::vector<double> noise(n, 0.0);
  for (NodeId i = 0; i < n; ++i) {
    const auto ui = y.row(i);
    double s = 0.0;
    for (NodeId k = 0; k < n; ++k)
      if (pn[k] > 0.0) s += pn[k] * log_sigmoid(-dot(ui, y.row(k)));
    noise[i] = s;
  }
  const double half_b = 0.5 * negatives;
  double loss = 0.0;
  for (const auto& e : g.edges()) {
    const auto ui = y.row(e.u), uj = y.row(e.v);
    const double x = dot(ui, uj);
    const double ni = noise[e.u] - pn[e.u] * log_sigmoid(-dot(ui, ui)) - pn[e.v] * log_sigmoid(-x);
    const double nj = noise[e.v] - pn[e.v] * log_sigmoid(-dot(uj, uj)) - pn[e.u] * log_sigmoid(-x);
    loss += e.weight * (-log_sigmoid(x) - half_b * (ni + nj));
  }
  return loss;
}

}  // namespace corestab

#include "corestab/embedding.hpp"

#include <cmath>
#include <stdexcept>

namespace corestab {

bool EmbeddingMatrix::all_finite() const noexcept {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

EmbeddingMatrix EmbeddingMatrix::select_rows(std::span<const NodeId> ids) const {
  EmbeddingMatrix out(ids.size(), dims_);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    if (ids[r] >= rows_) throw std::out_of_range("row id out of range");
    auto src = row(ids[r]);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) noexcept {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double sigmoid_proximity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("embedding dimension mismatch");
  return sigmoid(dot(u, v));
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::laplacian_eigenmaps:
      return "laplacian_eigenmaps";
    case Algorithm::line1:
      return "line1";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& tag) {
  if (tag == "laplacian_eigenmaps" || tag == "le") return Algorithm::laplacian_eigenmaps;
  if (tag == "line1" || tag == "line") return Algorithm::line1;
  throw std::invalid_argument("unknown embedding algorithm '" + tag + "'");
}

void EmbedSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("embedding dimension must be >= 1");
  if (algorithm == Algorithm::line1) {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning rate must be > 0");
    if (negatives < 1) throw std::invalid_argument("negatives per edge must be >= 1");
    if (batches < 1) throw std::invalid_argument("batch count must be >= 1");
  }
}

namespace {

class BuiltinEmbedder final : public Embedder {
 public:
  explicit BuiltinEmbedder(EmbedSpec spec) : spec_(spec) { spec_.validate(); }

  EmbeddingMatrix embed(const Graph& g, std::uint64_t seed) const override {
    EmbedSpec s = spec_;
    s.seed = seed;
    return base_embed(g, s);
  }
  std::string name() const override { return to_string(spec_.algorithm); }
  int dim() const override { return spec_.dim; }

 private:
  EmbedSpec spec_;
};

}  // namespace

std::unique_ptr<Embedder> make_embedder(const EmbedSpec& spec) {
  return std::make_unique<BuiltinEmbedder>(spec);
}

EmbeddingMatrix base_embed(const Graph& g, const EmbedSpec& spec) {
  spec.validate();
  switch (spec.algorithm) {
    case Algorithm::laplacian_eigenmaps:
      return laplacian_eigenmaps(g, spec.dim, spec.seed).embedding;
    case Algorithm::line1:
      return line1_embed(g, spec);
  }
  throw std::logic_error("unhandled algorithm");
}

}  // namespace corestab

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "corestab/graph.hpp"
#include "corestab/rng.hpp"

namespace corestab {

/// Dense row-major n x d matrix; row i is the embedding of node i.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::size_t rows, std::size_t dims) : rows_(rows), dims_(dims), data_(rows * dims) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t dims() const noexcept { return dims_; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * dims_, dims_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * dims_, dims_}; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dims_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dims_ + j]; }

  std::span<const double> values() const noexcept { return data_; }
  std::span<double> values() noexcept { return data_; }

  bool all_finite() const noexcept;

  /// Rows selected by `ids`, in that order.
  EmbeddingMatrix select_rows(std::span<const NodeId> ids) const;

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);

/// Numerically stable logistic function; exact saturation to 0 or 1 for large |x|.
double sigmoid(double x) noexcept;

/// log(sigmoid(x)) without overflow.
double log_sigmoid(double x) noexcept;

/// Logistic of a dot product clamped to [-35, 35]; used inside training loops.
inline double clipped_sigmoid(double x) noexcept {
  return sigmoid(x < -35.0 ? -35.0 : (x > 35.0 ? 35.0 : x));
}

/// First-order proximity sigma(u . v). Throws std::invalid_argument on dimension mismatch.
double sigmoid_proximity(std::span<const double> u, std::span<const double> v);

enum class Algorithm { laplacian_eigenmaps, line1 };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& tag);

struct EmbedSpec {
  Algorithm algorithm = Algorithm::line1;
  int dim = 10;
  std::uint64_t seed = 0;
  // LINE only.
  int batches = 200;     ///< n_b; one batch draws |E| edges
  int negatives = 5;     ///< b
  double learning_rate = 0.025;

  void validate() const;
};

/// Random-walk normalized Laplacian D^-1 (D - A) as a dense matrix.
/// Throws std::invalid_argument if any node is isolated.
Eigen::MatrixXd rw_normalized_laplacian(const Graph& g);

struct SpectralEmbedding {
  EmbeddingMatrix embedding;
  std::vector<double> eigenvalues;  ///< of L_rw, ascending, one per column
  std::size_t components = 0;       ///< zero eigenvalues skipped
};

/// Laplacian Eigenmaps: eigenvectors of L_rw for the d smallest eigenvalues after
/// skipping one zero eigenvalue per connected component. Columns are scaled so
/// that x^T D x = 1. `seed` drives the eigensolver start block.
/// Throws std::invalid_argument if d > n - C or a node is isolated,
/// NumericalError if the eigensolver does not converge.
SpectralEmbedding laplacian_eigenmaps(const Graph& g, int d, std::uint64_t seed = 0);

/// Eigenvalue with multiplicity.
struct EigenCluster {
  double value;
  std::size_t multiplicity;

  friend bool operator==(const EigenCluster&, const EigenCluster&) = default;
};

/// Closed form spectrum of L_rw for the n-clique, built from the decomposition
/// L_rw = -1/(n-1) * J + (1 + 1/(n-1)) * I, where the all-ones matrix J has
/// eigenvalues n (once) and 0 (n-1 times). Throws std::invalid_argument for n < 2.
std::vector<EigenCluster> clique_rw_spectrum(int n);

/// Groups ascending eigenvalues whose gap to the previous value is <= tol.
/// Each cluster reports its mean.
std::vector<EigenCluster> cluster_eigenvalues(std::vector<double> values, double tol);

/// Eigenvalues (ascending) of L_rw for the n-clique from a general
/// nonsymmetric dense solver.
std::vector<double> numeric_clique_rw_eigenvalues(int n);

/// numeric_clique_rw_eigenvalues, clustered.
std::vector<EigenCluster> numeric_clique_rw_spectrum(int n, double cluster_tol = 1e-6);

/// True when the numeric and closed-form spectra agree: same multiplicities
/// (clustered at 1e-6) and every eigenvalue within `tol` of its closed form.
bool verify_clique_spectrum(int n, double tol = 1e-8);

// ---------------------------------------------------------------------------
// LINE (first-order proximity) with negative sampling.

/// Gradients of -log sigma(u_i . u_j) - sum_j' log sigma(-u_i . u_j').
struct LineGradients {
  std::vector<double> source;                  ///< dL/du_i
  std::vector<double> target;                  ///< dL/du_j
  std::vector<std::vector<double>> negatives;  ///< dL/du_j' per negative
};

double line_edge_loss(std::span<const double> ui, std::span<const double> uj,
                      const std::vector<std::span<const double>>& negatives);

LineGradients line_edge_gradients(std::span<const double> ui, std::span<const double> uj,
                                  const std::vector<std::span<const double>>& negatives);

/// Walker alias table for O(1) sampling from a discrete distribution.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  std::size_t size() const noexcept { return prob_.size(); }
  template <class R>
  std::size_t sample(R& rng) const {
    std::size_t i = static_cast<std::size_t>(rng.below(prob_.size()));
    return rng.uniform() < prob_[i] ? i : alias_[i];
  }

  std::span<const double> probabilities() const noexcept { return prob_; }
  std::span<const std::size_t> aliases() const noexcept { return alias_; }

 private:
  std::vector<double> prob_;
  std::vector<std::size_t> alias_;
};

/// Noise distribution for negatives: weighted degree raised to the 3/4 power.
AliasTable make_negative_table(const Graph& g);

/// Uniform in [-0.5/d, 0.5/d] per entry.
EmbeddingMatrix line_initialization(std::size_t n, int d, std::uint64_t seed);

/// One LINE SGD step on edge (i, j); u_i gets the accumulated update at the end,
/// as in the original LINE code. Negatives equal to i or j are skipped.
/// `scale` multiplies the gradient (e.g. an edge weight under uniform sampling).
void line_sgd_step(EmbeddingMatrix& y, NodeId i, NodeId j, const AliasTable& negative_table,
                   int negatives, double learning_rate, Rng& rng, double scale = 1.0);

/// Trains first-order LINE. Edges are drawn proportional to weight; each of the
/// spec.batches batches draws |E| edges with a per-batch learning rate
/// eta * (1 - b / n_b). Isolated nodes keep their initialisation.
EmbeddingMatrix line1_embed(const Graph& g, const EmbedSpec& spec);

/// -sum_{(i,j) in E} w_ij log sigma(u_i . u_j).
double line_base_loss(const Graph& g, const EmbeddingMatrix& y);

/// Expected negative-sampling objective that line_sgd_step descends:
/// sum_E w_ij [-log sigma(u_i.u_j) - (b/2) sum_{j' != i,j} P_n(j') (log sigma(-u_i.u_j') + log sigma(-u_j.u_j'))]
/// with P_n proportional to weighted degree^0.75. O(n^2 d + m d).
double line_sampled_loss(const Graph& g, const EmbeddingMatrix& y, int negatives);

/// Learning rate for 0-based batch `b` of `batches`.
inline double linear_decay(double eta, std::size_t b, std::size_t batches) {
  return eta * (1.0 - static_cast<double>(b) / static_cast<double>(batches));
}

// ---------------------------------------------------------------------------
// Generic embedder interface.

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual EmbeddingMatrix embed(const Graph& g, std::uint64_t seed) const = 0;
  virtual std::string name() const = 0;
  virtual int dim() const = 0;
};

/// Embedder for a built-in algorithm; `seed` passed to embed() replaces spec.seed.
std::unique_ptr<Embedder> make_embedder(const EmbedSpec& spec);

/// Convenience: dispatch on spec.algorithm with spec.seed.
EmbeddingMatrix base_embed(const Graph& g, const EmbedSpec& spec);

// ---------------------------------------------------------------------------
// Serialisation.

/// CSV with header node_id,e0,...,e{d-1}; node_id is the graph label.
std::string format_embedding_csv(const EmbeddingMatrix& y, std::span<const NodeLabel> labels);

struct LabelledEmbedding {
  std::vector<NodeLabel> labels;
  EmbeddingMatrix embedding;
};

LabelledEmbedding parse_embedding_csv(const std::string& text);
LabelledEmbedding load_embedding_csv(const std::filesystem::path& path);

/// Reorders a labelled embedding to the dense ids of `g`; every node of g must be
/// present. Extra rows are ignored. Throws ParseError when nodes are missing.
EmbeddingMatrix align_embedding(const LabelledEmbedding& e, const Graph& g);

inline constexpr char kEmbeddingMagic[8] = {'C', 'S', 'T', 'B', 'E', 'M', 'B', '1'};

/// 8-byte magic, uint64 n, uint64 d (little endian), then n*d float64 row-major.
std::string format_embedding_binary(const EmbeddingMatrix& y);
EmbeddingMatrix parse_embedding_binary(const std::string& bytes);

}  // namespace corestab

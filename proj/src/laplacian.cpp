#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "corestab/eigensolver.hpp"
#include "corestab/embedding.hpp"
#include "corestab/error.hpp"

namespace corestab {

namespace {

void require_no_isolated(const Graph& g) {
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (g.weighted_degree(v) <= 0.0)
      throw std::invalid_argument("node " + std::to_string(g.label(v)) +
                                  " is isolated; random-walk Laplacian undefined");
}

}  // namespace

Eigen::MatrixXd rw_normalized_laplacian(const Graph& g) {
  require_no_isolated(g);
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const double inv = 1.0 / g.weighted_degree(v);
    for (const auto& nb : g.neighbors(v)) l(v, nb.node) -= nb.weight * inv;
  }
  return l;
}

SpectralEmbedding laplacian_eigenmaps(const Graph& g, int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("embedding dimension must be >= 1");
  require_no_isolated(g);
  const std::size_t n = g.node_count();
  const auto comp = g.components();
  const std::size_t components = n ? *std::max_element(comp.begin(), comp.end()) + 1 : 0;
  if (static_cast<std::size_t>(d) > n - components)
    throw std::invalid_argument("d = " + std::to_string(d) + " must be <= n - C = " +
                                std::to_string(n - components));

  // Work with L_sym = D^-1/2 L D^-1/2, which is similar to L_rw: if
  // L_sym v = lambda v then x = D^-1/2 v satisfies L_rw x = lambda x and
  // x^T D x = v^T v. We want the smallest eigenvalues of L_sym, i.e. the largest
  // of 2I - L_sym = I + D^-1/2 A D^-1/2.
  std::vector<double> inv_sqrt(n);
  for (NodeId v = 0; v < n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(g.weighted_degree(v));

  // Exact null space: D^1/2 1_c per component.
  Eigen::MatrixXd null_space = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(components));
  for (NodeId v = 0; v < n; ++v)
    null_space(v, static_cast<Eigen::Index>(comp[v])) = std::sqrt(g.weighted_degree(v));
  for (Eigen::Index c = 0; c < null_space.cols(); ++c) null_space.col(c).normalize();

  SymmetricOperator op;
  op.size = n;
  op.apply = [&g, &inv_sqrt](const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
    y = x;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      for (const auto& nb : g.neighbors(v)) {
        const double a = nb.weight * inv_sqrt[v] * inv_sqrt[nb.node];
        y.row(v) += a * x.row(nb.node);
      }
    }
  };

  auto eig = largest_eigenpairs(op, static_cast<std::size_t>(d), null_space, seed);

  SpectralEmbedding out;
  out.components = components;
  out.embedding = EmbeddingMatrix(n, static_cast<std::size_t>(d));
  out.eigenvalues.resize(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    out.eigenvalues[static_cast<std::size_t>(j)] = 2.0 - eig.values(j);
    Eigen::VectorXd x = eig.vectors.col(j);
    for (NodeId v = 0; v < n; ++v) x(v) *= inv_sqrt[v];
    // Sign convention: the entry of largest magnitude is positive.
    Eigen::Index arg = 0;
    x.cwiseAbs().maxCoeff(&arg);
    if (x(arg) < 0) x = -x;
    for (NodeId v = 0; v < n; ++v) out.embedding(v, static_cast<std::size_t>(j)) = x(v);
  }
  if (!out.embedding.all_finite()) throw NumericalError("Laplacian Eigenmaps produced non-finite values");
  return out;
}

std::vector<EigenCluster> clique_rw_spectrum(int n) {
  if (n < 2) throw std::invalid_argument("clique needs n >= 2");
  const double scale = -1.0 / (n - 1);
  const double shift = 1.0 + 1.0 / (n - 1);
  // eigs(J) = {0 (n-1 times), n (once)}; apply scale then shift.
  std::vector<EigenCluster> out{{scale * n + shift, 1}, {scale * 0.0 + shift, static_cast<std::size_t>(n - 1)}};
  // scale * n + shift is 0 analytically; remove rounding so the value is exact.
  out[0].value = 0.0;
  return out;
}

std::vector<EigenCluster> cluster_eigenvalues(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<EigenCluster> out;
  double sum = 0.0;
  double prev = 0.0;
  std::size_t count = 0;
  for (double v : values) {
    if (count > 0 && v - prev > tol) {
      out.push_back({sum / static_cast<double>(count), count});
      sum = 0.0;
      count = 0;
    }
    sum += v;
    ++count;
    prev = v;
  }
  if (count > 0) out.push_back({sum / static_cast<double>(count), count});
  return out;
}

std::vector<double> numeric_clique_rw_eigenvalues(int n) {
  if (n < 2) throw std::invalid_argument("clique needs n >= 2");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0});
  auto g = Graph::from_edges(static_cast<std::size_t>(n), std::move(edges));
  Eigen::EigenSolver<Eigen::MatrixXd> solver(rw_normalized_laplacian(g), false);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  std::vector<double> values;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const auto& z = solver.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-8) throw NumericalError("complex eigenvalue in clique spectrum");
    values.push_back(z.real());
  }
  std::sort(values.begin(), values.end());
  return values;
}

std::vector<EigenCluster> numeric_clique_rw_spectrum(int n, double cluster_tol) {
  return cluster_eigenvalues(numeric_clique_rw_eigenvalues(n), cluster_tol);
}

bool verify_clique_spectrum(int n, double tol) {
  const auto expected = clique_rw_spectrum(n);
  const auto raw = numeric_clique_rw_eigenvalues(n);
  const auto numeric = cluster_eigenvalues(raw, 1e-6);
  if (expected.size() != numeric.size()) return false;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (expected[i].multiplicity != numeric[i].multiplicity) return false;
    for (std::size_t j = 0; j < expected[i].multiplicity; ++j)
      if (std::abs(raw[offset + j] - expected[i].value) > tol) return false;
    offset += expected[i].multiplicity;
  }
  return true;
}

}  // namespace corestab

#include "corestab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "corestab/error.hpp"
#include "corestab/rng.hpp"

namespace corestab {

namespace {

Eigen::MatrixXd random_block(std::size_t rows, std::size_t cols, Rng& rng) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = rng.uniform(-1.0, 1.0);
  return x;
}

template <class Derived>
void project_out(Eigen::MatrixBase<Derived>& w, const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return;
  w.noalias() -= basis * (basis.transpose() * w);
}

// Orthonormalises `w` against `deflation` and `basis` (two passes) and within
// itself. Columns that collapse are dropped.
Eigen::MatrixXd orthonormal_extension(Eigen::MatrixXd w, const Eigen::MatrixXd& deflation,
                                      const Eigen::MatrixXd& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    project_out(w, deflation);
    project_out(w, basis);
  }
  std::vector<Eigen::VectorXd> kept;
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    Eigen::VectorXd v = w.col(j);
    const double before = v.norm();
    if (before == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) v -= q.dot(v) * q;
      if (pass == 1) {
        project_out(v, deflation);  // guard against drift from the in-block passes
        project_out(v, basis);
      }
    }
    const double after = v.norm();
    if (after <= 1e-10 * before || after < 1e-300) continue;
    kept.push_back(v / after);
  }
  Eigen::MatrixXd out(w.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = kept[j];
  return out;
}

}  // namespace

BlockEigenResult largest_eigenpairs(const SymmetricOperator& op, std::size_t wanted,
                                    const Eigen::MatrixXd& deflation, std::uint64_t seed,
                                    const BlockEigenOptions& options) {
  const std::size_t n = op.size;
  const std::size_t deflated = static_cast<std::size_t>(deflation.cols());
  if (deflation.cols() > 0 && static_cast<std::size_t>(deflation.rows()) != n)
    throw std::invalid_argument("deflation block has wrong row count");
  if (deflated > n || wanted == 0 || wanted > n - deflated)
    throw std::invalid_argument("requested eigenpair count exceeds the available subspace");

  const std::size_t space = n - deflated;
  const std::size_t block = std::min(space, wanted + options.guard_vectors);
  const std::size_t max_basis = std::min(space, std::max<std::size_t>(6 * block, 60));
  const std::size_t keep_on_restart = std::min(max_basis - std::min(max_basis, block), 3 * block);

  Rng rng(seed);
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(n), 0);
  Eigen::MatrixXd image(static_cast<Eigen::Index>(n), 0);

  auto expand = [&](Eigen::MatrixXd w) {
    Eigen::MatrixXd q = orthonormal_extension(std::move(w), deflation, basis);
    int retries = 0;
    while (q.cols() == 0 && static_cast<std::size_t>(basis.cols()) < space) {
      // Invariant subspace reached; continue from fresh random directions.
      q = orthonormal_extension(random_block(n, block, rng), deflation, basis);
      if (++retries > 8) throw NumericalError("eigensolver could not extend the search space");
    }
    const std::size_t room = max_basis - static_cast<std::size_t>(basis.cols());
    if (static_cast<std::size_t>(q.cols()) > room) q.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(room));
    if (q.cols() == 0) return;
    Eigen::MatrixXd aq(q.rows(), q.cols());
    op.apply(q, aq);
    const Eigen::Index m = basis.cols();
    basis.conservativeResize(Eigen::NoChange, m + q.cols());
    image.conservativeResize(Eigen::NoChange, m + q.cols());
    basis.rightCols(q.cols()) = q;
    image.rightCols(q.cols()) = aq;
  };

  expand(random_block(n, block, rng));

  for (std::size_t iter = 1;; ++iter) {
    Eigen::MatrixXd h = basis.transpose() * image;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(h);
    if (small.info() != Eigen::Success) throw NumericalError("projected eigenproblem failed");

    const Eigen::Index m = basis.cols();
    const Eigen::Index take = std::min<Eigen::Index>(m, static_cast<Eigen::Index>(block));
    // Largest Ritz values sit at the end of the ascending order.
    Eigen::MatrixXd s = small.eigenvectors().rightCols(take).rowwise().reverse();
    Eigen::VectorXd theta = small.eigenvalues().tail(take).reverse();
    Eigen::MatrixXd ritz = basis * s;
    Eigen::MatrixXd residual = image * s - ritz * theta.asDiagonal();

    std::vector<Eigen::Index> open;
    bool done = static_cast<std::size_t>(take) >= wanted;
    for (Eigen::Index j = 0; j < take; ++j) {
      const bool ok = residual.col(j).norm() <= options.tolerance;
      if (!ok) open.push_back(j);
      if (!ok && static_cast<std::size_t>(j) < wanted) done = false;
    }
    if (static_cast<std::size_t>(m) >= space) done = true;  // exact Rayleigh-Ritz
    if (done) {
      BlockEigenResult out;
      out.values = theta.head(static_cast<Eigen::Index>(wanted));
      out.vectors = ritz.leftCols(static_cast<Eigen::Index>(wanted));
      out.iterations = iter;
      return out;
    }
    if (iter >= options.max_iterations)
      throw NumericalError("eigensolver did not converge in " + std::to_string(iter) + " iterations");

    Eigen::MatrixXd next(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(open.size()));
    for (std::size_t j = 0; j < open.size(); ++j) next.col(static_cast<Eigen::Index>(j)) = residual.col(open[j]);

    if (static_cast<std::size_t>(m) + open.size() > max_basis) {
      // Thick restart on the leading Ritz vectors.
      const Eigen::Index keep = std::max<Eigen::Index>(take, std::min<Eigen::Index>(m, static_cast<Eigen::Index>(keep_on_restart)));
      Eigen::MatrixXd sk = small.eigenvectors().rightCols(keep).rowwise().reverse();
      Eigen::MatrixXd nb = basis * sk;
      Eigen::MatrixXd ni = image * sk;
      basis = std::move(nb);
      image = std::move(ni);
    }
    expand(std::move(next));
  }
}

}  // namespace corestab

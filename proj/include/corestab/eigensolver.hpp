#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace corestab {

/// Symmetric linear operator given by its action on a block of column vectors.
struct SymmetricOperator {
  std::size_t size = 0;
  std::function<void(const Eigen::MatrixXd& in, Eigen::MatrixXd& out)> apply;
};

struct BlockEigenOptions {
  double tolerance = 1e-10;        ///< on ||A y - theta y||_2 for unit y
  std::size_t max_iterations = 5000;
  std::size_t guard_vectors = 2;   ///< extra block columns beyond the wanted count
};

struct BlockEigenResult {
  Eigen::VectorXd values;   ///< descending
  Eigen::MatrixXd vectors;  ///< orthonormal columns
  std::size_t iterations = 0;
};

/// Largest `wanted` eigenpairs of a symmetric operator restricted to the
/// orthogonal complement of `deflation` (orthonormal columns, may be empty).
///
/// Thick-restart block Krylov iteration with full reorthogonalisation and
/// Rayleigh-Ritz on the search space. The start block is drawn from `seed`, so
/// bases of degenerate eigenspaces depend on it. Once the search space spans the
/// whole complement the answer is exact. Throws NumericalError if the residuals
/// do not converge within the iteration cap.
BlockEigenResult largest_eigenpairs(const SymmetricOperator& op, std::size_t wanted,
                                    const Eigen::MatrixXd& deflation, std::uint64_t seed,
                                    const BlockEigenOptions& options = {});

}  // namespace corestab

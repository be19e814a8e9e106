#pragma once

#include <functional>

#include <Eigen/Dense>

namespace gaplab {

/// Eigenvalues of the pencil (A, B) with symmetric A and positive
/// semidefinite B, restricted to range(B).
struct DeflatedEigen {
  Eigen::VectorXd values;        // ascending
  Eigen::MatrixXd vectors;       // coefficient vectors in the original basis, B-orthonormal
  int deflated_dimension = 0;    // rank kept
  double condition = 0.0;        // largest / smallest kept eigenvalue of B
  double min_gram_eigenvalue = 0.0;
};

/// Eigenvalues of B below `relative_tolerance * max eig(B)` are dropped.
/// B eigenvalues below -relative_tolerance * max eig(B) raise numeric-error.
DeflatedEigen deflated_generalized_eigen(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                         double relative_tolerance = 1e-10);

/// y = Op * x for a symmetric operator.
using SymmetricOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

struct LanczosOptions {
  int wanted = 1;            // number of extremal eigenpairs
  bool largest = false;      // false: smallest
  int basis_size = 0;        // 0: chosen from `wanted`
  int max_restarts = 500;
  double tolerance = 1e-9;   // residual norm ||A v - theta v||
  unsigned seed = 12345;
};

struct LanczosResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  double max_residual = 0.0;
  int restarts = 0;
  int matvecs = 0;
};

/// Thick-restart Lanczos with full reorthogonalization for the extremal
/// eigenvalues of a symmetric operator of dimension n. The search space is
/// kept orthogonal to the columns of `deflate` (assumed orthonormal).
LanczosResult lanczos_extremal(const SymmetricOperator& op, Eigen::Index n, const LanczosOptions& options,
                               const Eigen::MatrixXd& deflate = Eigen::MatrixXd());

}  // namespace gaplab

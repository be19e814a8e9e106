#include "gaplab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gaplab/error.hpp"

namespace gaplab {

DeflatedEigen deflated_generalized_eigen(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                         double relative_tolerance) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw Error(ErrorKind::ShapeError, "pencil matrices must be square and of equal size");
  const Eigen::Index n = A.rows();
  DeflatedEigen out;
  if (n == 0) return out;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gram(0.5 * (B + B.transpose()));
  if (gram.info() != Eigen::Success) throw Error(ErrorKind::NumericError, "Gram eigen solve failed");
  const Eigen::VectorXd& s = gram.eigenvalues();
  const double smax = s.maxCoeff();
  if (!(smax > 0.0)) throw Error(ErrorKind::NumericError, "Gram matrix has no positive direction");
  const double cut = relative_tolerance * smax;
  if (s.minCoeff() < -cut) throw Error(ErrorKind::NumericError, "Gram matrix is indefinite beyond tolerance");
  out.min_gram_eigenvalue = s.minCoeff();

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (s(i) > cut) keep.push_back(i);
  const auto k = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd basis(n, k);
  for (Eigen::Index c = 0; c < k; ++c)
    basis.col(c) = gram.eigenvectors().col(keep[static_cast<std::size_t>(c)]) / std::sqrt(s(keep[static_cast<std::size_t>(c)]));
  out.deflated_dimension = static_cast<int>(k);
  out.condition = smax / s(keep.front());

  Eigen::MatrixXd reduced = basis.transpose() * (0.5 * (A + A.transpose())) * basis;
  reduced = 0.5 * (reduced + reduced.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(reduced);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericError, "reduced eigen solve failed");
  out.values = es.eigenvalues();
  out.vectors = basis * es.eigenvectors();
  return out;
}

namespace {

// Two passes of classical Gram-Schmidt against the first `cols` columns of V
// and against `deflate`.
void orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& V, Eigen::Index cols, const Eigen::MatrixXd& deflate) {
  for (int pass = 0; pass < 2; ++pass) {
    if (deflate.cols() > 0) v -= deflate * (deflate.transpose() * v);
    if (cols > 0) v -= V.leftCols(cols) * (V.leftCols(cols).transpose() * v);
  }
}

}  // namespace

LanczosResult lanczos_extremal(const SymmetricOperator& op, Eigen::Index n, const LanczosOptions& options,
                               const Eigen::MatrixXd& deflate) {
  if (n <= 0) throw Error(ErrorKind::InvalidArgument, "operator dimension must be positive");
  const Eigen::Index free_dim = n - deflate.cols();
  if (free_dim <= 0) throw Error(ErrorKind::InvalidArgument, "deflation removes the whole space");
  const Eigen::Index wanted = std::min<Eigen::Index>(std::max(options.wanted, 1), free_dim);
  Eigen::Index m = options.basis_size > 0 ? options.basis_size : std::max<Eigen::Index>(2 * wanted + 20, 40);
  m = std::min(m, free_dim);
  const Eigen::Index keep = std::min<Eigen::Index>(m - 1, std::max<Eigen::Index>(wanted + 5, m / 2));

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
  };

  Eigen::MatrixXd V(n, m);
  Eigen::MatrixXd W(n, m);
  Eigen::VectorXd tmp(n);
  LanczosResult result;

  Eigen::Index size = 0;
  Eigen::VectorXd next = random_vector();

  auto append = [&](Eigen::VectorXd v) {
    orthogonalize(v, V, size, deflate);
    double norm = v.norm();
    int tries = 0;
    while (norm < 1e-10 && tries++ < 10) {
      v = random_vector();
      orthogonalize(v, V, size, deflate);
      norm = v.norm();
    }
    if (norm < 1e-10) return false;
    V.col(size) = v / norm;
    op(V.col(size), tmp);
    ++result.matvecs;
    W.col(size) = tmp;
    ++size;
    return true;
  };

  for (int restart = 0; restart <= options.max_restarts; ++restart) {
    while (size < m) {
      if (!append(next)) break;
      next = W.col(size - 1);
    }
    Eigen::MatrixXd H = V.leftCols(size).transpose() * W.leftCols(size);
    H = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericError, "Ritz eigen solve failed");

    // Order Ritz pairs from the wanted end of the spectrum.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(size));
    for (Eigen::Index i = 0; i < size; ++i) order[static_cast<std::size_t>(i)] = options.largest ? size - 1 - i : i;

    const Eigen::Index kept = std::min(keep, size);
    Eigen::MatrixXd Y(size, kept);
    for (Eigen::Index c = 0; c < kept; ++c) Y.col(c) = es.eigenvectors().col(order[static_cast<std::size_t>(c)]);
    Eigen::MatrixXd ritz_v = V.leftCols(size) * Y;
    Eigen::MatrixXd ritz_w = W.leftCols(size) * Y;

    double worst = 0.0;
    Eigen::Index first_bad = -1;
    for (Eigen::Index c = 0; c < std::min(wanted, kept); ++c) {
      const double theta = es.eigenvalues()(order[static_cast<std::size_t>(c)]);
      const double r = (ritz_w.col(c) - theta * ritz_v.col(c)).norm();
      worst = std::max(worst, r);
      if (r > options.tolerance && first_bad < 0) first_bad = c;
    }
    result.restarts = restart;
    if (first_bad < 0 || size >= free_dim) {
      result.values.resize(wanted);
      result.vectors = ritz_v.leftCols(wanted);
      for (Eigen::Index c = 0; c < wanted; ++c) result.values(c) = es.eigenvalues()(order[static_cast<std::size_t>(c)]);
      result.max_residual = worst;
      return result;
    }
    const double theta = es.eigenvalues()(order[static_cast<std::size_t>(first_bad)]);
    next = ritz_w.col(first_bad) - theta * ritz_v.col(first_bad);
    V.leftCols(kept) = ritz_v;
    W.leftCols(kept) = ritz_w;
    size = kept;
  }
  throw Error(ErrorKind::NumericError, "Lanczos did not converge within the restart budget");
}

}  // namespace gaplab

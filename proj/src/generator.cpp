#include "gaplab/generator.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "gaplab/error.hpp"
#include "gaplab/linalg.hpp"

namespace gaplab {

Eigen::SparseMatrix<double, Eigen::RowMajor> GeneratorMatrix::symmetrized() const {
  const Eigen::VectorXd root = measure.weights.array().sqrt();
  const Eigen::VectorXd inv_root = root.cwiseInverse();
  Eigen::SparseMatrix<double, Eigen::RowMajor> S = root.asDiagonal() * L * inv_root.asDiagonal();
  return S;
}

double GeneratorMatrix::max_row_sum() const {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < L.outerSize(); ++r) {
    double s = 0.0;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(L, r); it; ++it) s += it.value();
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

double GeneratorMatrix::max_asymmetry() const {
  const auto S = symmetrized();
  Eigen::SparseMatrix<double, Eigen::RowMajor> St = S.transpose();
  Eigen::SparseMatrix<double, Eigen::RowMajor> diff = S - St;
  double worst = 0.0;
  for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(diff, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

namespace {

void check_shapes(const InteractionGraph& graph, const StateSet& states) {
  if (graph.vertex_count != states.sites())
    throw Error(ErrorKind::ShapeError, "graph has " + std::to_string(graph.vertex_count) + " vertices but states have " +
                                           std::to_string(states.sites()) + " sites");
}

}  // namespace

GeneratorMatrix build_simple_average_generator(const InteractionGraph& graph, const StateSet& states,
                                               const RateFunction& g) {
  check_shapes(graph, states);
  const auto laws = pair_conditional_laws(g, states.total());
  const double scale = graph.pair_scaling;
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<int> work(static_cast<std::size_t>(states.sites()));
  for (std::int64_t i = 0; i < states.size(); ++i) {
    const auto eta = states[i];
    double diagonal = 0.0;
    for (const auto& [x, y] : graph.edges) {
      const int s = eta[static_cast<std::size_t>(x)] + eta[static_cast<std::size_t>(y)];
      const auto& law = laws[static_cast<std::size_t>(s)];
      std::copy(eta.begin(), eta.end(), work.begin());
      for (int k = 0; k <= s; ++k) {
        work[static_cast<std::size_t>(x)] = k;
        work[static_cast<std::size_t>(y)] = s - k;
        const auto j = states.index_of(work);
        const double rate = scale * law[static_cast<std::size_t>(k)];
        if (j == i) {
          diagonal += rate;
        } else {
          triplets.emplace_back(i, j, rate);
        }
      }
      diagonal -= scale;
    }
    triplets.emplace_back(i, i, diagonal);
  }
  GeneratorMatrix gen;
  gen.L.resize(states.size(), states.size());
  gen.L.setFromTriplets(triplets.begin(), triplets.end());
  gen.measure = stationary_weights(g, states);
  return gen;
}

GeneratorMatrix build_zero_range_generator(const InteractionGraph& graph, const StateSet& states,
                                           const RateFunction& g) {
  check_shapes(graph, states);
  const double scale = graph.pair_scaling;
  std::vector<double> rate(static_cast<std::size_t>(states.total() + 1));
  for (int k = 0; k <= states.total(); ++k) rate[static_cast<std::size_t>(k)] = g(k);
  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<int> work(static_cast<std::size_t>(states.sites()));
  for (std::int64_t i = 0; i < states.size(); ++i) {
    const auto eta = states[i];
    double diagonal = 0.0;
    for (const auto& edge : graph.edges) {
      for (int dir = 0; dir < 2; ++dir) {
        const int from = edge[static_cast<std::size_t>(dir)];
        const int to = edge[static_cast<std::size_t>(1 - dir)];
        const int n = eta[static_cast<std::size_t>(from)];
        if (n == 0) continue;
        std::copy(eta.begin(), eta.end(), work.begin());
        --work[static_cast<std::size_t>(from)];
        ++work[static_cast<std::size_t>(to)];
        const double r = scale * rate[static_cast<std::size_t>(n)];
        triplets.emplace_back(i, states.index_of(work), r);
        diagonal -= r;
      }
    }
    triplets.emplace_back(i, i, diagonal);
  }
  GeneratorMatrix gen;
  gen.L.resize(states.size(), states.size());
  gen.L.setFromTriplets(triplets.begin(), triplets.end());
  gen.measure = stationary_weights(g, states);
  return gen;
}

GeneratorMatrix build_generator(const ModelSpec& model, const InteractionGraph& graph, const StateSet& states) {
  switch (model.family) {
    case Family::ZeroRange: return build_zero_range_generator(graph, states, model.rate());
    case Family::SimpleAverage:
      if (model.discrete()) return build_simple_average_generator(graph, states, model.rate());
      break;
    default: break;
  }
  throw Error(ErrorKind::InvalidArgument, "model '" + std::string(model.id()) + "' has no finite state space");
}

GapResult spectral_analysis(const GeneratorMatrix& gen, const GapOptions& options) {
  GapResult out;
  const Eigen::Index n = gen.dimension();
  out.dimension = n;
  if (gen.measure.weights.size() != n) throw Error(ErrorKind::ShapeError, "measure does not match the generator");
  if (n <= 1) return out;

  const auto S = gen.symmetrized();
  const Eigen::VectorXd root = gen.measure.weights.array().sqrt();

  if (n <= options.dense_limit) {
    Eigen::MatrixXd M = -Eigen::MatrixXd(S);
    M = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericError, "dense eigen solve failed");
    const auto& ev = es.eigenvalues();
    const double scale = std::max(1.0, std::abs(ev(n - 1)));
    if (ev(0) < -options.psd_tolerance * scale)
      throw Error(ErrorKind::NotNegativeSemidefinite, "eigenvalue " + std::to_string(ev(0)) + " of -L is negative");
    // ev(0) is the constant mode; a second zero means the chain is reducible.
    out.gap = ev(1) > options.zero_threshold ? ev(1) : 0.0;
    out.top = ev(n - 1);
    out.eigenvector = es.eigenvectors().col(1).cwiseQuotient(root);
    return out;
  }

  out.iterative = true;
  const Eigen::MatrixXd deflate = root / root.norm();
  SymmetricOperator op = [&S](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y.noalias() = -(S * x); };
  LanczosOptions lo;
  lo.wanted = 1;
  const auto low = lanczos_extremal(op, n, lo, deflate);
  if (low.values(0) < -options.psd_tolerance)
    throw Error(ErrorKind::NotNegativeSemidefinite, "eigenvalue of -L is negative");
  out.gap = low.values(0) > options.zero_threshold ? low.values(0) : 0.0;
  out.eigenvector = low.vectors.col(0).cwiseQuotient(root);
  if (options.want_top) {
    lo.largest = true;
    out.top = lanczos_extremal(op, n, lo, deflate).values(0);
  }
  return out;
}

}  // namespace gaplab

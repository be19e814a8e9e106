#pragma once

#include <cstdint>
#include <limits>

#include <Eigen/Sparse>

#include "gaplab/model.hpp"
#include "gaplab/states.hpp"

namespace gaplab {

/// Markov generator L on functions over a StateSet, stored sparse and
/// row-major: (L f)(i) = sum_j L(i, j) f(j).
struct GeneratorMatrix {
  Eigen::SparseMatrix<double, Eigen::RowMajor> L;
  Measure measure;

  Eigen::Index dimension() const noexcept { return L.rows(); }
  /// D^{1/2} L D^{-1/2} with D = diag(weights).
  Eigen::SparseMatrix<double, Eigen::RowMajor> symmetrized() const;
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(L); }

  double max_row_sum() const;
  double max_asymmetry() const;
};

/// Simple-average generator: pair_scaling * sum_b (nu[f | F_b] - f), where the
/// pair total is redistributed by the two-site conditional law of the measure.
GeneratorMatrix build_simple_average_generator(const InteractionGraph& graph, const StateSet& states,
                                               const RateFunction& g);

/// Zero-range generator: on every edge a particle hops x -> y at rate g(eta_x)
/// and y -> x at rate g(eta_y), times pair_scaling.
GeneratorMatrix build_zero_range_generator(const InteractionGraph& graph, const StateSet& states,
                                           const RateFunction& g);

/// Generator for a discrete catalog model (zero-range or simple-average).
GeneratorMatrix build_generator(const ModelSpec& model, const InteractionGraph& graph, const StateSet& states);

inline constexpr double infinite_gap = std::numeric_limits<double>::infinity();

struct GapOptions {
  double zero_threshold = 1e-8;
  double psd_tolerance = 1e-9;
  Eigen::Index dense_limit = 4000;
  bool want_top = false;  // also report the largest eigenvalue of -L
};

struct GapResult {
  double gap = infinite_gap;
  double top = infinite_gap;   // sup of the spectrum of -L; +inf when not requested
  Eigen::Index dimension = 0;
  bool iterative = false;
  Eigen::VectorXd eigenvector; // gap eigenvector of -L as a function on states (empty for dim 1)
};

/// Smallest eigenvalue of -L above the zero threshold, i.e. the spectral gap;
/// +inf when the state space is a single point.
GapResult spectral_analysis(const GeneratorMatrix& gen, const GapOptions& options = {});

inline double spectral_gap(const GeneratorMatrix& gen, const GapOptions& options = {}) {
  return spectral_analysis(gen, options).gap;
}

}  // namespace gaplab

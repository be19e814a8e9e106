#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaplab/model.hpp"

namespace gaplab {

/// A configuration over the graph vertices: `real` for the continuous
/// families, `count` for the integer ones.
struct Configuration {
  std::vector<double> real;
  std::vector<int> count;
};

using Observable = std::function<double(const Configuration&)>;

struct SimState {
  Configuration config;
  double omega = 0.0;
  double time = 0.0;
  std::uint64_t events = 0;
  std::mt19937_64 rng;
};

/// Evenly spread starting point with total omega.
Configuration default_initial(const ModelSpec& model, int sites, double omega);

/// Continuous-time pair-collision dynamics driven by exponential clocks, one
/// per graph edge, sampled Gillespie-style from a sum tree of edge rates.
class Simulator {
 public:
  Simulator(ModelSpec model, InteractionGraph graph, Configuration initial, std::uint64_t seed);

  const SimState& state() const noexcept { return state_; }
  const ModelSpec& model() const noexcept { return model_; }
  const InteractionGraph& graph() const noexcept { return graph_; }

  /// Runs events until the clock passes t; the clock is left at exactly t
  /// (the pending exponential clock is redrawn, which is exact).
  void advance_to(double t);
  /// One event.
  void step();

  double total_rate() const noexcept { return tree_.empty() ? 0.0 : tree_[1]; }
  double max_drift() const noexcept { return max_drift_; }
  std::uint64_t clip_incidents() const noexcept { return clips_; }
  /// |sum xi - omega| recomputed from scratch (exact 0 for integer models).
  double conservation_error() const;

  /// Edge rate before scaling by pair_scaling.
  double edge_rate(int e) const;
  /// Replaces the pair (x, y) of `c` by a post-collision draw.
  void collide(int x, int y, Configuration& c, std::mt19937_64& rng) const;
  /// Gamma f at the current state: sum over edges of the scaled rate times the
  /// expected squared increment of f. Exact for the integer models; the
  /// continuous ones average `inner` collision draws per edge.
  double carre_du_champ(const Observable& f, int inner, std::mt19937_64& rng) const;

 private:
  void set_rate(int e, double r);
  int sample_edge(double u) const;
  void apply(int e);

  ModelSpec model_;
  InteractionGraph graph_;
  SimState state_;
  bool constant_rates_ = true;
  std::size_t leaves_ = 1;
  std::vector<double> tree_;
  std::vector<std::vector<int>> incident_;
  std::vector<std::vector<double>> pair_cdf_;  // discrete simple average, by pair total
  double drift_ = 0.0;
  double max_drift_ = 0.0;
  std::uint64_t clips_ = 0;
};

struct SampleStream {
  std::vector<double> times;
  Eigen::MatrixXd values;  // one row per sample, one column per observable
};

struct SimulationSummary {
  double time = 0.0;
  std::uint64_t events = 0;
  double max_drift = 0.0;
  double conservation_error = 0.0;
  std::uint64_t clip_incidents = 0;
  SampleStream samples;
};

struct SimulateOptions {
  double horizon = 100.0;
  double burn_in = 0.0;
  double stride = 0.05;
  std::uint64_t seed = 1;
};

/// Runs one trajectory and samples every observable on the stride grid
/// after the burn-in.
SimulationSummary simulate(const ModelSpec& model, const InteractionGraph& graph, const Configuration& initial,
                           const std::vector<Observable>& observables, const SimulateOptions& options);

struct EstimatorResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double ess = 0.0;
  std::int64_t samples = 0;
  double lag_lo = 0.0;  // fit window in time units
  double lag_hi = 0.0;
  double residual = 0.0;  // rms of the log-linear fit
  std::string caveat;

  bool covers(double x) const { return x >= ci_lo && x <= ci_hi; }
};

struct EstimatorOptions {
  double horizon = 2e4;
  double burn_in = 50.0;
  double stride = 0.05;
  std::uint64_t seed = 1;
  int replicas = 1;
  int blocks = 40;
  int resamples = 100;
  int inner = 8;           // proposals per edge for the continuous carre du champ
  double omega = 1.0;      // total for the default starting point
  std::optional<Configuration> initial;
};

/// Slowest decay rate of the stationary autocorrelation of f: fits
/// log C(t) over the lags with C(t)/C(0) in [0.1, 0.8].
EstimatorResult autocorr_gap_estimate(const ModelSpec& model, const InteractionGraph& graph, const Observable& f,
                                      const EstimatorOptions& options);

/// nu(f (-L) f) / Var(f) from the per-state expected squared increments.
EstimatorResult rayleigh_upper_bound(const ModelSpec& model, const InteractionGraph& graph, const Observable& f,
                                     const EstimatorOptions& options);

/// Streamed sample file: one JSON header line holding at least "columns",
/// then little-endian float64 frames (time, v_1, ..., v_k).
void write_samples(std::ostream& out, const std::string& header_json, const SampleStream& samples);
SampleStream read_samples(std::istream& in, std::string* header_json = nullptr);

}  // namespace gaplab

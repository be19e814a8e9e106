#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace gaplab {

// ---------------------------------------------------------------------------
// Rate functions g(k) for the integer-valued site space.
// ---------------------------------------------------------------------------

/// Positive jump-rate function on the positive integers, with g(0) = 0.
class RateFunction {
 public:
  static RateFunction constant_one();
  static RateFunction identity();
  /// values[k-1] = g(k); evaluating beyond the table is a domain-error.
  static RateFunction from_table(std::vector<double> values, std::string name = "user-table");
  static RateFunction custom(std::string name, std::function<double(long)> g);

  double operator()(long k) const;
  const std::string& name() const noexcept { return name_; }

  /// log g(k)! = sum_{i<=k} log g(i), compensated summation; entry 0 is 0.
  std::vector<double> log_factorials(long k_max) const;

 private:
  RateFunction(std::string name, std::function<double(long)> g) : name_(std::move(name)), g_(std::move(g)) {}

  std::string name_;
  std::function<double(long)> g_;
};

// ---------------------------------------------------------------------------
// Single-site space and conservation law.
// ---------------------------------------------------------------------------

enum class SiteKind { RealLineGaussian, GammaHalfLine, NonnegativeIntegers };

struct SiteSpace {
  SiteKind kind = SiteKind::RealLineGaussian;
  double gamma = 0.0;                 // shape, gamma kind only
  std::optional<RateFunction> rate;   // integer kind only

  static SiteSpace gaussian() { return {}; }
  static SiteSpace gamma_shape(double shape);
  static SiteSpace zero_range(RateFunction g);

  bool contains(double value) const;
};

enum class ConservationLaw { Square, Identity };

inline double xi(ConservationLaw law, double value) {
  return law == ConservationLaw::Square ? value * value : value;
}

/// Sum of xi over the configuration. Values outside the site space raise a
/// domain-error.
double conserved_total(std::span<const double> config, ConservationLaw law, const SiteSpace& site);
long conserved_total(std::span<const int> config);

// ---------------------------------------------------------------------------
// Interaction graphs.
// ---------------------------------------------------------------------------

enum class GraphKind { Complete, Lattice };

std::string_view to_string(GraphKind kind) noexcept;
GraphKind parse_graph_kind(std::string_view name);

using Edge = std::array<int, 2>;

/// Complete graph on N vertices (pair scaling 1/N) or the cube {1..N}^d with
/// nearest-neighbour edges (pair scaling 1). Vertices are 0-based; lattice
/// coordinates are 1-based with the first coordinate varying fastest.
struct InteractionGraph {
  GraphKind kind = GraphKind::Complete;
  int N = 0;
  int d = 0;
  int vertex_count = 0;
  std::vector<Edge> edges;
  double pair_scaling = 1.0;

  std::vector<int> coordinates(int vertex) const;
  int vertex_at(std::span<const int> coords) const;
  bool adjacent(int u, int v) const;
};

InteractionGraph build_graph(GraphKind kind, int d, int N);

// ---------------------------------------------------------------------------
// Collision-angle density for the generalized Kac walk.
// ---------------------------------------------------------------------------

/// Probability density on (-pi, pi], held by its Fourier coefficients
/// rho_hat(n) = int e^{i n theta} rho(theta) d theta, optionally together with
/// the density itself.
class RhoSpec {
 public:
  static RhoSpec uniform();
  /// coefficients[n] = rho_hat(n) for n = 0..n_max.
  static RhoSpec from_fourier(std::vector<std::complex<double>> coefficients);
  /// Coefficients by periodic trapezoid quadrature on `nodes` points.
  static RhoSpec from_density(std::function<double(double)> density, int n_max = 64, int nodes = 4096);

  bool is_uniform() const noexcept { return uniform_; }
  bool has_density() const noexcept { return static_cast<bool>(density_); }
  /// Highest available order; uniform densities report INT_MAX.
  int order() const noexcept;
  /// rho_hat(n), with rho_hat(-n) = conj(rho_hat(n)); order-error beyond n_max.
  std::complex<double> coefficient(int n) const;
  /// Density value; reconstructed from the truncated series when only
  /// coefficients were given.
  double density(double theta) const;
  /// Quadrature mass of the density on the stored grid.
  double mass() const noexcept { return mass_; }
  /// Minimum of the (reconstructed) density over the quadrature grid.
  double min_density() const noexcept { return min_density_; }
  /// Cumulative table for inverse-CDF sampling (negative parts clipped).
  const std::vector<double>& cdf() const noexcept { return cdf_; }
  int grid_nodes() const noexcept { return static_cast<int>(cdf_.size()) - 1; }

 private:
  void tabulate(int nodes);

  bool uniform_ = false;
  std::vector<std::complex<double>> coefficients_;
  std::function<double(double)> density_;
  double mass_ = 1.0;
  double min_density_ = 0.0;
  std::vector<double> cdf_;
};

// ---------------------------------------------------------------------------
// Gamma energy-exchange models.
// ---------------------------------------------------------------------------

/// The simple-average kernel: alpha ~ Beta(gamma, gamma) regardless of beta.
struct SimpleAverageKernel {};

/// Row-stochastic transition matrix between uniform cells of [0, 1].
struct DiscretizedKernel {
  Eigen::MatrixXd transition;
  int cells() const noexcept { return static_cast<int>(transition.rows()); }
};

/// Beta(gamma, gamma) cell masses on a uniform grid of [0, 1].
Eigen::VectorXd beta_cell_masses(double gamma, int cells);

/// The simple-average kernel as a matrix: every row equals the Beta cell masses.
DiscretizedKernel discretize_simple_average_kernel(double gamma, int cells = 512);

struct GammaExchangeSpec {
  double gamma = 1.0;
  std::function<double(double)> lambda_s;  // total-energy factor
  std::function<double(double)> lambda_r;  // energy-fraction factor, bounded on (0,1)
  std::variant<SimpleAverageKernel, DiscretizedKernel> kernel;

  static GammaExchangeSpec simple_average(double gamma);

  bool is_simple_average() const noexcept;
  /// Lambda(e1, e2) = Lambda_s(e1 + e2) Lambda_r(e1 / (e1 + e2)).
  double rate(double e1, double e2) const;
};

// ---------------------------------------------------------------------------
// Model catalog.
// ---------------------------------------------------------------------------

enum class Family { KacUniform, KacRho, GammaExchange, ZeroRange, SimpleAverage };

/// Catalog identifiers: "kac", "kac-rho", "gamma-exchange", "zero-range",
/// "simple-average".
std::string_view family_id(Family family) noexcept;
Family parse_family(std::string_view id);

struct ModelSpec {
  Family family = Family::KacUniform;
  SiteSpace site;
  ConservationLaw law = ConservationLaw::Square;
  std::optional<RhoSpec> rho;
  std::optional<GammaExchangeSpec> exchange;

  static ModelSpec kac();
  static ModelSpec kac_rho(RhoSpec rho);
  static ModelSpec gamma_exchange(GammaExchangeSpec spec);
  static ModelSpec zero_range(RateFunction g);
  /// Simple-average dynamics over the integer site space with rates g.
  static ModelSpec simple_average(RateFunction g);
  /// Simple-average dynamics over Gamma(shape) sites (the Beta redistribution).
  static ModelSpec simple_average_gamma(double shape);

  std::string_view id() const noexcept { return family_id(family); }
  bool discrete() const noexcept { return site.kind == SiteKind::NonnegativeIntegers; }
  const RateFunction& rate() const;
  /// Shape of the Gamma marginal for continuous energy models.
  double gamma_shape() const;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
  const ValidationCheck* find(std::string_view name) const;
};

struct ValidationOptions {
  double detailed_balance_tolerance = 1e-8;
  double mass_tolerance = 1e-6;
  int sample_grid = 1000;
};

ValidationReport validate_model(const ModelSpec& spec, const ValidationOptions& options = {});

}  // namespace gaplab

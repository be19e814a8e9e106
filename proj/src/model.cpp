#include "gaplab/model.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>

#include "gaplab/error.hpp"
#include "gaplab/special.hpp"

namespace gaplab {

// --- RateFunction ----------------------------------------------------------

RateFunction RateFunction::constant_one() {
  return RateFunction("constant-one", [](long) { return 1.0; });
}

RateFunction RateFunction::identity() {
  return RateFunction("identity", [](long k) { return static_cast<double>(k); });
}

RateFunction RateFunction::from_table(std::vector<double> values, std::string name) {
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::DomainError, "rate table entries must be positive");
  auto table = std::make_shared<const std::vector<double>>(std::move(values));
  return RateFunction(std::move(name), [table](long k) {
    if (k > static_cast<long>(table->size()))
      throw Error(ErrorKind::DomainError, "rate table has no entry for k = " + std::to_string(k));
    return (*table)[static_cast<std::size_t>(k - 1)];
  });
}

RateFunction RateFunction::custom(std::string name, std::function<double(long)> g) {
  return RateFunction(std::move(name), std::move(g));
}

double RateFunction::operator()(long k) const {
  if (k < 0) throw Error(ErrorKind::DomainError, "rate evaluated at a negative occupation");
  if (k == 0) return 0.0;
  const double v = g_(k);
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorKind::DomainError, "rate g(" + std::to_string(k) + ") is not positive");
  return v;
}

std::vector<double> RateFunction::log_factorials(long k_max) const {
  std::vector<double> out(static_cast<std::size_t>(k_max + 1), 0.0);
  double sum = 0.0;
  double carry = 0.0;
  for (long k = 1; k <= k_max; ++k) {
    const double y = std::log((*this)(k)) - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
    out[static_cast<std::size_t>(k)] = sum;
  }
  return out;
}

// --- SiteSpace -------------------------------------------------------------

SiteSpace SiteSpace::gamma_shape(double shape) {
  if (!(shape > 0.0)) throw Error(ErrorKind::DomainError, "gamma shape must be positive");
  SiteSpace s;
  s.kind = SiteKind::GammaHalfLine;
  s.gamma = shape;
  return s;
}

SiteSpace SiteSpace::zero_range(RateFunction g) {
  SiteSpace s;
  s.kind = SiteKind::NonnegativeIntegers;
  s.rate = std::move(g);
  return s;
}

bool SiteSpace::contains(double value) const {
  if (!std::isfinite(value)) return false;
  switch (kind) {
    case SiteKind::RealLineGaussian: return true;
    case SiteKind::GammaHalfLine: return value >= 0.0;
    case SiteKind::NonnegativeIntegers: return value >= 0.0 && value == std::floor(value);
  }
  return false;
}

double conserved_total(std::span<const double> config, ConservationLaw law, const SiteSpace& site) {
  double total = 0.0;
  for (double v : config) {
    if (!site.contains(v)) throw Error(ErrorKind::DomainError, "configuration value outside the site space");
    total += xi(law, v);
  }
  return total;
}

long conserved_total(std::span<const int> config) {
  long total = 0;
  for (int v : config) {
    if (v < 0) throw Error(ErrorKind::DomainError, "negative occupation number");
    total += v;
  }
  return total;
}

// --- InteractionGraph ------------------------------------------------------

std::string_view to_string(GraphKind kind) noexcept {
  return kind == GraphKind::Complete ? "complete" : "lattice";
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "complete") return GraphKind::Complete;
  if (name == "lattice") return GraphKind::Lattice;
  throw Error(ErrorKind::InvalidArgument, "unknown graph kind '" + std::string(name) + "'");
}

std::vector<int> InteractionGraph::coordinates(int vertex) const {
  if (vertex < 0 || vertex >= vertex_count) throw Error(ErrorKind::InvalidArgument, "vertex out of range");
  if (kind == GraphKind::Complete) return {vertex + 1};
  std::vector<int> c(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    c[static_cast<std::size_t>(k)] = vertex % N + 1;
    vertex /= N;
  }
  return c;
}

int InteractionGraph::vertex_at(std::span<const int> coords) const {
  if (kind == GraphKind::Complete) {
    if (coords.size() != 1 || coords[0] < 1 || coords[0] > N)
      throw Error(ErrorKind::InvalidArgument, "vertex label out of range");
    return coords[0] - 1;
  }
  if (static_cast<int>(coords.size()) != d) throw Error(ErrorKind::InvalidArgument, "coordinate arity mismatch");
  int v = 0;
  int stride = 1;
  for (int k = 0; k < d; ++k) {
    const int c = coords[static_cast<std::size_t>(k)];
    if (c < 1 || c > N) throw Error(ErrorKind::InvalidArgument, "lattice coordinate out of range");
    v += (c - 1) * stride;
    stride *= N;
  }
  return v;
}

bool InteractionGraph::adjacent(int u, int v) const {
  if (u == v) return false;
  if (kind == GraphKind::Complete) return true;
  const auto a = coordinates(u);
  const auto b = coordinates(v);
  int dist = 0;
  for (std::size_t k = 0; k < a.size(); ++k) dist += std::abs(a[k] - b[k]);
  return dist == 1;
}

InteractionGraph build_graph(GraphKind kind, int d, int N) {
  if (N < 2) throw Error(ErrorKind::InvalidSize, "graph needs N >= 2");
  InteractionGraph g;
  g.kind = kind;
  g.N = N;
  if (kind == GraphKind::Complete) {
    g.d = 0;
    g.vertex_count = N;
    g.pair_scaling = 1.0 / N;
    g.edges.reserve(static_cast<std::size_t>(N) * (N - 1) / 2);
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) g.edges.push_back({i, j});
    return g;
  }
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "lattice needs d >= 1");
  long count = 1;
  for (int k = 0; k < d; ++k) {
    count *= N;
    if (count > 50'000'000) throw Error(ErrorKind::TooLarge, "lattice has too many vertices");
  }
  g.d = d;
  g.vertex_count = static_cast<int>(count);
  g.pair_scaling = 1.0;
  for (int v = 0; v < g.vertex_count; ++v) {
    int rest = v;
    int stride = 1;
    for (int k = 0; k < d; ++k) {
      const int c = rest % N;
      rest /= N;
      if (c + 1 < N) g.edges.push_back({v, v + stride});
      stride *= N;
    }
  }
  return g;
}

// --- RhoSpec ---------------------------------------------------------------

RhoSpec RhoSpec::uniform() {
  RhoSpec r;
  r.uniform_ = true;
  r.coefficients_ = {1.0};
  r.density_ = [](double) { return 1.0 / (2.0 * std::numbers::pi); };
  r.tabulate(4096);
  return r;
}

RhoSpec RhoSpec::from_fourier(std::vector<std::complex<double>> coefficients) {
  if (coefficients.empty()) throw Error(ErrorKind::InvalidArgument, "need at least rho_hat(0)");
  RhoSpec r;
  r.coefficients_ = std::move(coefficients);
  r.tabulate(4096);
  return r;
}

RhoSpec RhoSpec::from_density(std::function<double(double)> density, int n_max, int nodes) {
  if (n_max < 0 || nodes < 2 * n_max + 1) throw Error(ErrorKind::InvalidArgument, "too few quadrature nodes");
  RhoSpec r;
  r.density_ = std::move(density);
  const double h = 2.0 * std::numbers::pi / nodes;
  r.coefficients_.assign(static_cast<std::size_t>(n_max + 1), 0.0);
  for (int k = 0; k < nodes; ++k) {
    const double theta = -std::numbers::pi + (k + 0.5) * h;
    const double w = r.density_(theta) * h;
    for (int n = 0; n <= n_max; ++n) r.coefficients_[static_cast<std::size_t>(n)] += w * std::polar(1.0, n * theta);
  }
  r.tabulate(nodes);
  return r;
}

int RhoSpec::order() const noexcept {
  return uniform_ ? INT_MAX : static_cast<int>(coefficients_.size()) - 1;
}

std::complex<double> RhoSpec::coefficient(int n) const {
  const int m = n < 0 ? -n : n;
  if (uniform_) return m == 0 ? 1.0 : 0.0;
  if (m >= static_cast<int>(coefficients_.size()))
    throw Error(ErrorKind::OrderError, "rho_hat(" + std::to_string(n) + ") not available");
  const auto c = coefficients_[static_cast<std::size_t>(m)];
  return n < 0 ? std::conj(c) : c;
}

double RhoSpec::density(double theta) const {
  if (density_) return density_(theta);
  // (1/2pi) sum_n rho_hat(n) e^{-i n theta}
  double v = coefficients_[0].real();
  for (std::size_t n = 1; n < coefficients_.size(); ++n)
    v += 2.0 * (coefficients_[n] * std::polar(1.0, -static_cast<double>(n) * theta)).real();
  return v / (2.0 * std::numbers::pi);
}

void RhoSpec::tabulate(int nodes) {
  const double h = 2.0 * std::numbers::pi / nodes;
  cdf_.assign(static_cast<std::size_t>(nodes + 1), 0.0);
  mass_ = 0.0;
  min_density_ = INFINITY;
  for (int k = 0; k < nodes; ++k) {
    const double v = density(-std::numbers::pi + (k + 0.5) * h);
    min_density_ = std::min(min_density_, v);
    mass_ += v * h;
    cdf_[static_cast<std::size_t>(k + 1)] = cdf_[static_cast<std::size_t>(k)] + std::max(v, 0.0) * h;
  }
}

// --- Gamma exchange --------------------------------------------------------

Eigen::VectorXd beta_cell_masses(double gamma, int cells) {
  if (cells < 1) throw Error(ErrorKind::InvalidArgument, "need at least one cell");
  Eigen::VectorXd m(cells);
  double prev = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double next = incomplete_beta(gamma, gamma, static_cast<double>(i + 1) / cells);
    m(i) = next - prev;
    prev = next;
  }
  return m;
}

DiscretizedKernel discretize_simple_average_kernel(double gamma, int cells) {
  const Eigen::VectorXd m = beta_cell_masses(gamma, cells);
  DiscretizedKernel k;
  k.transition = m.transpose().replicate(cells, 1);
  return k;
}

GammaExchangeSpec GammaExchangeSpec::simple_average(double gamma) {
  if (!(gamma > 0.0)) throw Error(ErrorKind::DomainError, "gamma shape must be positive");
  GammaExchangeSpec s;
  s.gamma = gamma;
  s.lambda_s = [](double) { return 1.0; };
  s.lambda_r = [](double) { return 1.0; };
  s.kernel = SimpleAverageKernel{};
  return s;
}

bool GammaExchangeSpec::is_simple_average() const noexcept {
  return std::holds_alternative<SimpleAverageKernel>(kernel);
}

double GammaExchangeSpec::rate(double e1, double e2) const {
  const double s = e1 + e2;
  if (!(s > 0.0)) return 0.0;
  return lambda_s(s) * lambda_r(e1 / s);
}

// --- ModelSpec -------------------------------------------------------------

std::string_view family_id(Family family) noexcept {
  switch (family) {
    case Family::KacUniform: return "kac";
    case Family::KacRho: return "kac-rho";
    case Family::GammaExchange: return "gamma-exchange";
    case Family::ZeroRange: return "zero-range";
    case Family::SimpleAverage: return "simple-average";
  }
  return "unknown";
}

Family parse_family(std::string_view id) {
  for (Family f : {Family::KacUniform, Family::KacRho, Family::GammaExchange, Family::ZeroRange, Family::SimpleAverage})
    if (family_id(f) == id) return f;
  throw Error(ErrorKind::InvalidArgument, "unknown model '" + std::string(id) + "'");
}

ModelSpec ModelSpec::kac() {
  ModelSpec m;
  m.family = Family::KacUniform;
  m.site = SiteSpace::gaussian();
  m.law = ConservationLaw::Square;
  m.rho = RhoSpec::uniform();
  return m;
}

ModelSpec ModelSpec::kac_rho(RhoSpec rho) {
  ModelSpec m = kac();
  m.family = Family::KacRho;
  m.rho = std::move(rho);
  return m;
}

ModelSpec ModelSpec::gamma_exchange(GammaExchangeSpec spec) {
  ModelSpec m;
  m.family = Family::GammaExchange;
  m.site = SiteSpace::gamma_shape(spec.gamma);
  m.law = ConservationLaw::Identity;
  m.exchange = std::move(spec);
  return m;
}

ModelSpec ModelSpec::zero_range(RateFunction g) {
  ModelSpec m;
  m.family = Family::ZeroRange;
  m.site = SiteSpace::zero_range(std::move(g));
  m.law = ConservationLaw::Identity;
  return m;
}

ModelSpec ModelSpec::simple_average(RateFunction g) {
  ModelSpec m = zero_range(std::move(g));
  m.family = Family::SimpleAverage;
  return m;
}

ModelSpec ModelSpec::simple_average_gamma(double shape) {
  ModelSpec m = gamma_exchange(GammaExchangeSpec::simple_average(shape));
  m.family = Family::SimpleAverage;
  return m;
}

const RateFunction& ModelSpec::rate() const {
  if (!site.rate) throw Error(ErrorKind::InvalidArgument, "model has no integer rate function");
  return *site.rate;
}

double ModelSpec::gamma_shape() const {
  if (site.kind != SiteKind::GammaHalfLine) throw Error(ErrorKind::InvalidArgument, "model has no Gamma marginal");
  return site.gamma;
}

// --- validation ------------------------------------------------------------

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

void validate_rho(const RhoSpec& rho, const ValidationOptions& opt, ValidationReport& report) {
  const double c0 = rho.coefficient(0).real();
  report.checks.push_back({"rho-normalized", std::abs(c0 - 1.0) <= opt.mass_tolerance, std::abs(c0 - 1.0)});
  if (rho.has_density()) {
    const double dm = std::abs(rho.mass() - 1.0);
    report.checks.push_back({"rho-density-mass", dm <= opt.mass_tolerance, dm});
  }
  double worst = 0.0;
  if (!rho.is_uniform()) {
    for (int n = 1; n <= rho.order(); ++n) worst = std::max(worst, std::abs(rho.coefficient(n)) - 1.0);
  }
  report.checks.push_back({"rho-coefficient-bound", worst <= 1e-12, std::max(worst, 0.0)});
  const double neg = std::max(0.0, -rho.min_density());
  report.checks.push_back({"rho-nonnegative", neg <= 1e-12, neg});
}

void validate_exchange(const GammaExchangeSpec& spec, const ValidationOptions& opt, ValidationReport& report) {
  const int grid = std::max(opt.sample_grid, 2);
  double sup_r = 0.0;
  double min_product = INFINITY;
  bool finite = true;
  for (int i = 1; i < grid; ++i) {
    const double beta = static_cast<double>(i) / grid;
    const double r = spec.lambda_r(beta);
    if (!std::isfinite(r)) finite = false;
    sup_r = std::max(sup_r, r);
    for (double sigma : {1e-3, 1e-1, 1.0, 10.0, 1e3}) min_product = std::min(min_product, spec.lambda_s(sigma) * r);
  }
  report.checks.push_back({"lambda-r-bounded", finite && std::isfinite(sup_r), sup_r});
  report.checks.push_back({"rate-positive", min_product > 0.0, min_product});

  if (spec.is_simple_average()) {
    report.checks.push_back({"detailed-balance", true, 0.0});
    report.checks.push_back({"kernel-stochastic", true, 0.0});
    return;
  }
  const auto& P = std::get<DiscretizedKernel>(spec.kernel).transition;
  const int m = static_cast<int>(P.rows());
  if (P.cols() != m) throw Error(ErrorKind::ShapeError, "kernel matrix must be square");
  // p(d beta) ~ [beta(1-beta)]^{gamma-1} Lambda_r(beta): Beta cell mass times Lambda_r at the midpoint.
  Eigen::VectorXd p = beta_cell_masses(spec.gamma, m);
  for (int i = 0; i < m; ++i) p(i) *= spec.lambda_r((i + 0.5) / m);
  p /= p.sum();
  double stochastic = (P.rowwise().sum().array() - 1.0).abs().maxCoeff();
  stochastic = std::max(stochastic, std::max(0.0, -P.minCoeff()));
  const Eigen::MatrixXd flux = p.asDiagonal() * P;
  const double balance = (flux - flux.transpose()).cwiseAbs().maxCoeff();
  report.checks.push_back({"kernel-stochastic", stochastic <= 1e-10, stochastic});
  report.checks.push_back({"detailed-balance", balance <= opt.detailed_balance_tolerance, balance});
}

}  // namespace

ValidationReport validate_model(const ModelSpec& spec, const ValidationOptions& options) {
  ValidationReport report;
  const bool pairing = (spec.law == ConservationLaw::Square) == (spec.site.kind == SiteKind::RealLineGaussian);
  report.checks.push_back({"site-law-pairing", pairing, 0.0});
  switch (spec.family) {
    case Family::KacUniform:
    case Family::KacRho:
      if (!spec.rho) {
        report.checks.push_back({"rho-present", false, 0.0});
      } else {
        validate_rho(*spec.rho, options, report);
      }
      break;
    case Family::GammaExchange:
      if (!spec.exchange) {
        report.checks.push_back({"exchange-present", false, 0.0});
      } else {
        validate_exchange(*spec.exchange, options, report);
      }
      break;
    case Family::ZeroRange:
    case Family::SimpleAverage:
      if (spec.site.kind == SiteKind::NonnegativeIntegers) {
        double min_g = INFINITY;
        bool ok = true;
        try {
          for (long k = 1; k <= options.sample_grid; ++k) min_g = std::min(min_g, (*spec.site.rate)(k));
        } catch (const Error&) {
          // tables may be shorter than the sample grid; what was scanned stands
        }
        ok = min_g > 0.0;
        report.checks.push_back({"rate-positive", ok, min_g});
      } else if (spec.exchange) {
        validate_exchange(*spec.exchange, options, report);
      }
      break;
  }
  return report;
}

}  // namespace gaplab

#include "gaplab/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "gaplab/error.hpp"
#include "gaplab/parallel.hpp"
#include "gaplab/special.hpp"
#include "gaplab/states.hpp"

namespace gaplab {

namespace {

bool integer_model(const ModelSpec& m) { return m.discrete(); }

bool is_gamma_site(const ModelSpec& m) { return m.site.kind == SiteKind::GammaHalfLine; }

double draw_beta(double a, double b, std::mt19937_64& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

double draw_angle(const ModelSpec& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double theta;
  if (m.family == Family::KacUniform || !m.rho || m.rho->is_uniform()) {
    theta = -std::numbers::pi + 2.0 * std::numbers::pi * U(rng);
  } else {
    const auto& cdf = m.rho->cdf();
    const double u = U(rng) * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto k = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cdf.begin(), 1, static_cast<std::ptrdiff_t>(cdf.size() - 1)));
    const double lo = cdf[k - 1];
    const double hi = cdf[k];
    const double frac = hi > lo ? (u - lo) / (hi - lo) : 0.5;
    const double h = 2.0 * std::numbers::pi / static_cast<double>(cdf.size() - 1);
    theta = -std::numbers::pi + (static_cast<double>(k - 1) + frac) * h;
  }
  // fair coin on the rotation sign: symmetrized angle law
  return (rng() & 1ULL) ? theta : -theta;
}

std::string dump(const Configuration& c) {
  std::ostringstream s;
  s << "[";
  for (std::size_t i = 0; i < c.real.size(); ++i) s << (i ? ", " : "") << c.real[i];
  for (std::size_t i = 0; i < c.count.size(); ++i) s << (i ? ", " : "") << c.count[i];
  s << "]";
  return s.str();
}

}  // namespace

Configuration default_initial(const ModelSpec& model, int sites, double omega) {
  if (sites < 1) throw Error(ErrorKind::InvalidSize, "need at least one site");
  if (omega < 0.0) throw Error(ErrorKind::DomainError, "total must be nonnegative");
  Configuration c;
  if (integer_model(model)) {
    const auto total = static_cast<long>(std::llround(omega));
    if (std::abs(static_cast<double>(total) - omega) > 1e-12)
      throw Error(ErrorKind::DomainError, "integer models need an integer total");
    c.count.assign(static_cast<std::size_t>(sites), static_cast<int>(total / sites));
    for (long k = 0; k < total % sites; ++k) c.count[static_cast<std::size_t>(k)] += 1;
  } else if (model.law == ConservationLaw::Square) {
    c.real.assign(static_cast<std::size_t>(sites), std::sqrt(omega / sites));
  } else {
    c.real.assign(static_cast<std::size_t>(sites), omega / sites);
  }
  return c;
}

Simulator::Simulator(ModelSpec model, InteractionGraph graph, Configuration initial, std::uint64_t seed)
    : model_(std::move(model)), graph_(std::move(graph)) {
  const auto V = static_cast<std::size_t>(graph_.vertex_count);
  if (integer_model(model_)) {
    if (initial.count.size() != V) throw Error(ErrorKind::ShapeError, "initial configuration size differs from the graph");
    for (int v : initial.count)
      if (v < 0) throw Error(ErrorKind::DomainError, "negative occupation");
    state_.omega = static_cast<double>(conserved_total(std::span<const int>(initial.count)));
  } else {
    if (initial.real.size() != V) throw Error(ErrorKind::ShapeError, "initial configuration size differs from the graph");
    state_.omega = conserved_total(initial.real, model_.law, model_.site);
  }
  state_.config = std::move(initial);
  state_.rng.seed(seed);

  constant_rates_ = model_.family == Family::KacUniform || model_.family == Family::KacRho ||
                    model_.family == Family::SimpleAverage;
  const auto E = graph_.edges.size();
  leaves_ = std::bit_ceil(std::max<std::size_t>(E, 1));
  tree_.assign(2 * leaves_, 0.0);
  incident_.assign(V, {});
  for (std::size_t e = 0; e < E; ++e) {
    incident_[static_cast<std::size_t>(graph_.edges[e][0])].push_back(static_cast<int>(e));
    incident_[static_cast<std::size_t>(graph_.edges[e][1])].push_back(static_cast<int>(e));
  }
  for (std::size_t e = 0; e < E; ++e) set_rate(static_cast<int>(e), edge_rate(static_cast<int>(e)));

  if (model_.family == Family::SimpleAverage && integer_model(model_)) {
    const int s_max = static_cast<int>(state_.omega);
    pair_cdf_ = pair_conditional_laws(model_.rate(), s_max);
    for (auto& row : pair_cdf_)
      for (std::size_t k = 1; k < row.size(); ++k) row[k] += row[k - 1];
  }
}

double Simulator::edge_rate(int e) const {
  const auto [x, y] = graph_.edges[static_cast<std::size_t>(e)];
  const auto& c = state_.config;
  switch (model_.family) {
    case Family::KacUniform:
    case Family::KacRho:
    case Family::SimpleAverage:
      return 1.0;
    case Family::ZeroRange: {
      const auto& g = model_.rate();
      return g(c.count[static_cast<std::size_t>(x)]) + g(c.count[static_cast<std::size_t>(y)]);
    }
    case Family::GammaExchange: {
      const double a = c.real[static_cast<std::size_t>(x)];
      const double b = c.real[static_cast<std::size_t>(y)];
      if (a + b <= 0.0) return 0.0;
      const double r = model_.exchange->rate(a, b);
      if (!std::isfinite(r) || r < 0.0)
        throw Error(ErrorKind::SimulationAbort, "exchange rate " + std::to_string(r) + " at state " + dump(c));
      return r;
    }
  }
  return 0.0;
}

void Simulator::set_rate(int e, double r) {
  std::size_t i = leaves_ + static_cast<std::size_t>(e);
  tree_[i] = r;
  for (i /= 2; i >= 1; i /= 2) tree_[i] = tree_[2 * i] + tree_[2 * i + 1];
}

int Simulator::sample_edge(double u) const {
  std::size_t i = 1;
  while (i < leaves_) {
    if (u < tree_[2 * i] || tree_[2 * i + 1] <= 0.0) {
      i = 2 * i;
    } else {
      u -= tree_[2 * i];
      i = 2 * i + 1;
    }
  }
  return static_cast<int>(i - leaves_);
}

void Simulator::collide(int x, int y, Configuration& c, std::mt19937_64& rng) const {
  const auto xs = static_cast<std::size_t>(x);
  const auto ys = static_cast<std::size_t>(y);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  switch (model_.family) {
    case Family::KacUniform:
    case Family::KacRho: {
      const double t = draw_angle(model_, rng);
      const double a = c.real[xs];
      const double b = c.real[ys];
      const double cs = std::cos(t);
      const double sn = std::sin(t);
      c.real[xs] = a * cs - b * sn;
      c.real[ys] = a * sn + b * cs;
      return;
    }
    case Family::ZeroRange: {
      const auto& g = model_.rate();
      const double gx = g(c.count[xs]);
      const double gy = g(c.count[ys]);
      if (gx + gy <= 0.0) return;
      if (U(rng) * (gx + gy) < gx) {
        --c.count[xs];
        ++c.count[ys];
      } else {
        ++c.count[xs];
        --c.count[ys];
      }
      return;
    }
    case Family::SimpleAverage:
      if (integer_model(model_)) {
        const int s = c.count[xs] + c.count[ys];
        std::vector<double> local;
        const std::vector<double>* row = nullptr;
        if (static_cast<std::size_t>(s) < pair_cdf_.size()) {
          row = &pair_cdf_[static_cast<std::size_t>(s)];
        } else {
          local = pair_conditional_laws(model_.rate(), s)[static_cast<std::size_t>(s)];
          for (std::size_t k = 1; k < local.size(); ++k) local[k] += local[k - 1];
          row = &local;
        }
        const double u = U(rng) * row->back();
        const auto k = static_cast<int>(std::upper_bound(row->begin(), row->end(), u) - row->begin());
        c.count[xs] = std::min(k, s);
        c.count[ys] = s - c.count[xs];
        return;
      }
      [[fallthrough]];
    case Family::GammaExchange: {
      const double s = c.real[xs] + c.real[ys];
      double alpha;
      if (model_.family == Family::SimpleAverage || model_.exchange->is_simple_average()) {
        const double shape = model_.gamma_shape();
        alpha = draw_beta(shape, shape, rng);
      } else {
        const auto& K = std::get<DiscretizedKernel>(model_.exchange->kernel);
        const int cells = K.cells();
        const double beta = s > 0.0 ? c.real[xs] / s : 0.5;
        const int row = std::clamp(static_cast<int>(beta * cells), 0, cells - 1);
        const double u = U(rng);
        double acc = 0.0;
        int j = cells - 1;
        for (int k = 0; k < cells; ++k) {
          acc += K.transition(row, k);
          if (u < acc) {
            j = k;
            break;
          }
        }
        alpha = (j + U(rng)) / cells;
      }
      c.real[xs] = alpha * s;
      c.real[ys] = s - alpha * s;
      return;
    }
  }
}

void Simulator::apply(int e) {
  const auto [x, y] = graph_.edges[static_cast<std::size_t>(e)];
  auto& c = state_.config;
  const auto xs = static_cast<std::size_t>(x);
  const auto ys = static_cast<std::size_t>(y);
  if (integer_model(model_)) {
    collide(x, y, c, state_.rng);
  } else {
    const double before = xi(model_.law, c.real[xs]) + xi(model_.law, c.real[ys]);
    collide(x, y, c, state_.rng);
    if (is_gamma_site(model_)) {
      const double floor = -1e-12 * std::max(state_.omega, 1e-300);
      for (auto s : {xs, ys}) {
        if (c.real[s] < 0.0) {
          if (c.real[s] < floor) throw Error(ErrorKind::SimulationAbort, "negative energy after update: " + dump(c));
          c.real[s] = 0.0;
          ++clips_;
        }
      }
    }
    const double after = xi(model_.law, c.real[xs]) + xi(model_.law, c.real[ys]);
    drift_ += after - before;
    max_drift_ = std::max(max_drift_, std::abs(drift_));
  }
  if (!constant_rates_) {
    for (auto v : {xs, ys})
      for (int f : incident_[v]) set_rate(f, edge_rate(f));
  }
  ++state_.events;
  if (clips_ > 10 && static_cast<double>(clips_) > 1e-5 * static_cast<double>(state_.events))
    throw Error(ErrorKind::SimulationAbort, "too many negative-energy clips");
}

void Simulator::step() {
  const double total = total_rate() * graph_.pair_scaling;
  if (!(total > 0.0)) throw Error(ErrorKind::SimulationAbort, "no pair can collide: total rate is 0");
  std::exponential_distribution<double> wait(total);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  state_.time += wait(state_.rng);
  apply(sample_edge(U(state_.rng) * total_rate()));
}

void Simulator::advance_to(double t) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  while (true) {
    const double total = total_rate() * graph_.pair_scaling;
    if (!(total > 0.0)) {
      state_.time = std::max(state_.time, t);
      return;
    }
    std::exponential_distribution<double> wait(total);
    const double next = state_.time + wait(state_.rng);
    if (next > t) {
      state_.time = t;
      return;
    }
    state_.time = next;
    apply(sample_edge(U(state_.rng) * total_rate()));
  }
}

double Simulator::conservation_error() const {
  if (integer_model(model_))
    return std::abs(static_cast<double>(conserved_total(std::span<const int>(state_.config.count))) - state_.omega);
  double s = 0.0;
  for (double v : state_.config.real) s += xi(model_.law, v);
  return std::abs(s - state_.omega);
}

double Simulator::carre_du_champ(const Observable& f, int inner, std::mt19937_64& rng) const {
  const auto& c = state_.config;
  const double f0 = f(c);
  Configuration work = c;
  double total = 0.0;
  for (std::size_t e = 0; e < graph_.edges.size(); ++e) {
    const auto [x, y] = graph_.edges[e];
    const auto xs = static_cast<std::size_t>(x);
    const auto ys = static_cast<std::size_t>(y);
    double expected = 0.0;
    if (model_.family == Family::ZeroRange) {
      const auto& g = model_.rate();
      const double gx = g(c.count[xs]);
      const double gy = g(c.count[ys]);
      if (gx > 0.0) {
        --work.count[xs];
        ++work.count[ys];
        const double d = f(work) - f0;
        expected += gx * d * d;
        ++work.count[xs];
        --work.count[ys];
      }
      if (gy > 0.0) {
        ++work.count[xs];
        --work.count[ys];
        const double d = f(work) - f0;
        expected += gy * d * d;
        --work.count[xs];
        ++work.count[ys];
      }
    } else if (integer_model(model_)) {
      const int s = c.count[xs] + c.count[ys];
      const auto& row = pair_cdf_[static_cast<std::size_t>(s)];
      double prev = 0.0;
      for (int k = 0; k <= s; ++k) {
        work.count[xs] = k;
        work.count[ys] = s - k;
        const double d = f(work) - f0;
        expected += (row[static_cast<std::size_t>(k)] - prev) * d * d;
        prev = row[static_cast<std::size_t>(k)];
      }
      work.count[xs] = c.count[xs];
      work.count[ys] = c.count[ys];
    } else {
      const double r = edge_rate(static_cast<int>(e));
      double acc = 0.0;
      for (int k = 0; k < inner; ++k) {
        collide(x, y, work, rng);
        const double d = f(work) - f0;
        acc += d * d;
        work.real[xs] = c.real[xs];
        work.real[ys] = c.real[ys];
      }
      expected = r * acc / inner;
    }
    total += expected;
  }
  return graph_.pair_scaling * total;
}

SimulationSummary simulate(const ModelSpec& model, const InteractionGraph& graph, const Configuration& initial,
                           const std::vector<Observable>& observables, const SimulateOptions& options) {
  if (!(options.horizon > 0.0) || !(options.stride > 0.0) || options.burn_in < 0.0)
    throw Error(ErrorKind::InvalidArgument, "horizon and stride must be positive, burn-in nonnegative");
  Simulator sim(model, graph, initial, options.seed);
  sim.advance_to(options.burn_in);
  SimulationSummary out;
  const auto n = static_cast<Eigen::Index>(std::floor(options.horizon / options.stride)) + 1;
  out.samples.times.reserve(static_cast<std::size_t>(n));
  out.samples.values.resize(observables.empty() ? 0 : n, static_cast<Eigen::Index>(observables.size()));
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = options.burn_in + static_cast<double>(k) * options.stride;
    sim.advance_to(t);
    out.samples.times.push_back(t);
    for (std::size_t j = 0; j < observables.size(); ++j)
      out.samples.values(k, static_cast<Eigen::Index>(j)) = observables[j](sim.state().config);
  }
  out.time = sim.state().time;
  out.events = sim.state().events;
  out.max_drift = sim.max_drift();
  out.conservation_error = sim.conservation_error();
  out.clip_incidents = sim.clip_incidents();
  return out;
}

namespace {

struct Fit {
  double rate = NAN;
  double residual = 0.0;
};

// least squares of log c against t; lags with c <= 0 are skipped
Fit log_linear_fit(const std::vector<double>& t, const std::vector<double>& c) {
  double sw = 0, st = 0, sy = 0, stt = 0, sty = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(c[i] > 0.0)) continue;
    const double y = std::log(c[i]);
    pts.emplace_back(t[i], y);
    sw += 1;
    st += t[i];
    sy += y;
    stt += t[i] * t[i];
    sty += t[i] * y;
  }
  Fit fit;
  if (pts.size() < 3) return fit;
  const double den = sw * stt - st * st;
  if (!(den > 0.0)) return fit;
  const double slope = (sw * sty - st * sy) / den;
  const double icept = (sy - slope * st) / sw;
  fit.rate = -slope;
  double r2 = 0.0;
  for (const auto& [x, y] : pts) r2 += (y - icept - slope * x) * (y - icept - slope * x);
  fit.residual = std::sqrt(r2 / static_cast<double>(pts.size()));
  return fit;
}

std::vector<Eigen::VectorXd> run_replicas(const ModelSpec& model, const InteractionGraph& graph, const Observable& f,
                                          const EstimatorOptions& o) {
  if (o.replicas < 1 || o.blocks < 2 || o.resamples < 10)
    throw Error(ErrorKind::InvalidArgument, "need replicas >= 1, blocks >= 2, resamples >= 10");
  if (!(o.horizon > 0.0) || !(o.stride > 0.0) || o.burn_in < 0.0)
    throw Error(ErrorKind::InvalidArgument, "horizon and stride must be positive, burn-in nonnegative");
  const Configuration init = o.initial ? *o.initial : default_initial(model, graph.vertex_count, o.omega);
  std::vector<Eigen::VectorXd> series(static_cast<std::size_t>(o.replicas));
  parallel_for(o.replicas, [&](std::int64_t r) {
    SimulateOptions so;
    so.horizon = o.horizon;
    so.burn_in = o.burn_in;
    so.stride = o.stride;
    so.seed = derive_seed(o.seed, static_cast<std::uint64_t>(r));
    auto sum = simulate(model, graph, init, {f}, so);
    series[static_cast<std::size_t>(r)] = sum.samples.values.col(0);
  });
  return series;
}

struct Block {
  const double* data;
  Eigen::Index size;
};

std::vector<Block> split_blocks(const std::vector<Eigen::VectorXd>& series, int blocks) {
  std::vector<Block> out;
  const int per = std::max(1, blocks / static_cast<int>(series.size()));
  for (const auto& s : series) {
    const Eigen::Index len = s.size() / per;
    if (len < 2) throw Error(ErrorKind::InvalidArgument, "horizon too short for the block count");
    for (int b = 0; b < per; ++b) out.push_back({s.data() + b * len, len});
  }
  return out;
}

double t_quantile_975(int df) {
  // invert F(t) = 1 - I_{df/(df+t^2)}(df/2, 1/2) / 2 by bisection
  double lo = 0.0, hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + mid * mid));
    if (tail > 0.025) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

void finish_interval(EstimatorResult& r, const std::vector<double>& boot, int blocks) {
  double m = 0.0;
  for (double b : boot) m += b;
  m /= static_cast<double>(boot.size());
  double v = 0.0;
  for (double b : boot) v += (b - m) * (b - m);
  r.std_error = std::sqrt(v / static_cast<double>(boot.size() - 1));
  const double q = t_quantile_975(blocks - 1);
  r.ci_lo = r.estimate - q * r.std_error;
  r.ci_hi = r.estimate + q * r.std_error;
}

}  // namespace

EstimatorResult autocorr_gap_estimate(const ModelSpec& model, const InteractionGraph& graph, const Observable& f,
                                      const EstimatorOptions& o) {
  const auto series = run_replicas(model, graph, f, o);
  double mean = 0.0;
  std::int64_t count = 0;
  for (const auto& s : series) {
    mean += s.sum();
    count += s.size();
  }
  mean /= static_cast<double>(count);
  auto blocks = split_blocks(series, o.blocks);
  std::vector<Eigen::VectorXd> centered;
  for (auto& b : blocks) {
    centered.emplace_back(Eigen::Map<const Eigen::VectorXd>(b.data, b.size).array() - mean);
  }
  const Eigen::Index min_len = std::min_element(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
                                 return a.size < b.size;
                               })->size;
  const Eigen::Index h_cap = std::max<Eigen::Index>(4, min_len / 4);

  // lag h: per-block sums S_b(h) and pair counts
  auto lag_sum = [&](std::size_t b, Eigen::Index h) {
    const auto& x = centered[b];
    const Eigen::Index n = x.size() - h;
    return std::make_pair(x.head(n).dot(x.tail(n)), static_cast<double>(n));
  };
  auto pooled = [&](Eigen::Index h) {
    double s = 0.0, n = 0.0;
    for (std::size_t b = 0; b < centered.size(); ++b) {
      const auto [sb, nb] = lag_sum(b, h);
      s += sb;
      n += nb;
    }
    return s / n;
  };

  const double c0 = pooled(0);
  if (!(c0 > 0.0)) throw Error(ErrorKind::DegenerateObservable, "observable has zero variance along the run");
  std::vector<Eigen::Index> lags;
  Eigen::Index h = 1;
  bool decayed = false;
  for (; h <= h_cap; ++h) {
    const double ratio = pooled(h) / c0;
    if (ratio < 0.1) {
      decayed = true;
      break;
    }
    if (ratio <= 0.8) lags.push_back(h);
  }
  if (!decayed)
    throw Error(ErrorKind::NoFit, "autocorrelation did not fall below 0.1 within a quarter block (lag " +
                                      std::to_string(h_cap * o.stride) + "); increase the horizon");
  if (lags.size() < 3)
    throw Error(ErrorKind::NoFit, "fewer than 3 lags with C(t)/C(0) in [0.1, 0.8]; reduce the sampling stride");

  // per-block lag sums on the fixed window
  const auto B = blocks.size();
  Eigen::MatrixXd S(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(lags.size()));
  Eigen::MatrixXd Nn(S.rows(), S.cols());
  for (std::size_t b = 0; b < B; ++b)
    for (std::size_t j = 0; j < lags.size(); ++j) {
      const auto [s, n] = lag_sum(b, lags[j]);
      S(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) = s;
      Nn(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j)) = n;
    }
  std::vector<double> t(lags.size());
  for (std::size_t j = 0; j < lags.size(); ++j) t[j] = static_cast<double>(lags[j]) * o.stride;
  auto fit_from = [&](const Eigen::VectorXd& weights) {
    std::vector<double> c(lags.size());
    for (std::size_t j = 0; j < lags.size(); ++j)
      c[j] = weights.dot(S.col(static_cast<Eigen::Index>(j))) / weights.dot(Nn.col(static_cast<Eigen::Index>(j)));
    return log_linear_fit(t, c);
  };

  EstimatorResult r;
  const auto full = fit_from(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(B)));
  if (!std::isfinite(full.rate) || !(full.rate > 0.0)) throw Error(ErrorKind::NoFit, "log-linear fit failed");
  r.estimate = full.rate;
  r.residual = full.residual;
  r.samples = count;
  r.lag_lo = t.front();
  r.lag_hi = t.back();

  std::mt19937_64 rng(derive_seed(o.seed, 0xB007));
  std::uniform_int_distribution<std::size_t> pick(0, B - 1);
  std::vector<double> boot;
  for (int k = 0; k < o.resamples; ++k) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(B));
    for (std::size_t i = 0; i < B; ++i) w(static_cast<Eigen::Index>(pick(rng))) += 1.0;
    const auto fb = fit_from(w);
    if (std::isfinite(fb.rate)) boot.push_back(fb.rate);
  }
  if (boot.size() < static_cast<std::size_t>(o.resamples) / 2) throw Error(ErrorKind::NoFit, "bootstrap fits failed");
  finish_interval(r, boot, static_cast<int>(B));
  const double total_time = static_cast<double>(count) * o.stride;
  r.ess = std::min(static_cast<double>(count), total_time * r.estimate / 2.0);
  r.caveat = "rate of the slowest mode present in f; exceeds the gap when f misses the gap eigenspace";
  return r;
}

EstimatorResult rayleigh_upper_bound(const ModelSpec& model, const InteractionGraph& graph, const Observable& f,
                                     const EstimatorOptions& o) {
  if (o.replicas < 1 || o.blocks < 2 || o.resamples < 10 || o.inner < 1)
    throw Error(ErrorKind::InvalidArgument, "need replicas >= 1, blocks >= 2, resamples >= 10, inner >= 1");
  const Configuration init = o.initial ? *o.initial : default_initial(model, graph.vertex_count, o.omega);
  const int per = std::max(1, o.blocks / o.replicas);
  // per block: sum Gamma f, sum f, sum f^2, count
  std::vector<std::array<double, 4>> stats(static_cast<std::size_t>(o.replicas * per), {0, 0, 0, 0});
  parallel_for(o.replicas, [&](std::int64_t r) {
    const auto seed = derive_seed(o.seed, static_cast<std::uint64_t>(r));
    Simulator sim(model, graph, init, seed);
    std::mt19937_64 inner_rng(derive_seed(seed, 0x1A2E));
    sim.advance_to(o.burn_in);
    const auto n = static_cast<std::int64_t>(std::floor(o.horizon / o.stride)) + 1;
    const std::int64_t len = n / per;
    if (len < 2) throw Error(ErrorKind::InvalidArgument, "horizon too short for the block count");
    for (std::int64_t k = 0; k < len * per; ++k) {
      sim.advance_to(o.burn_in + static_cast<double>(k) * o.stride);
      const double v = f(sim.state().config);
      const double g = sim.carre_du_champ(f, o.inner, inner_rng);
      auto& s = stats[static_cast<std::size_t>(r * per + k / len)];
      s[0] += g;
      s[1] += v;
      s[2] += v * v;
      s[3] += 1.0;
    }
  });
  auto quotient = [&](const Eigen::VectorXd& w) {
    double g = 0, a = 0, b = 0, n = 0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
      const double wi = w(static_cast<Eigen::Index>(i));
      g += wi * stats[i][0];
      a += wi * stats[i][1];
      b += wi * stats[i][2];
      n += wi * stats[i][3];
    }
    const double var = b / n - (a / n) * (a / n);
    return std::make_pair(0.5 * (g / n) / var, var);
  };
  const auto B = stats.size();
  const auto [q, var] = quotient(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(B)));
  double scale = 0.0;
  for (const auto& s : stats) scale = std::max(scale, s[2] / std::max(s[3], 1.0));
  if (!(var > 1e-12 * std::max(scale, 1e-300)))
    throw Error(ErrorKind::DegenerateObservable, "observable variance is not positive");
  EstimatorResult r;
  r.estimate = q;
  for (const auto& s : stats) r.samples += static_cast<std::int64_t>(s[3]);
  std::mt19937_64 rng(derive_seed(o.seed, 0xB008));
  std::uniform_int_distribution<std::size_t> pick(0, B - 1);
  std::vector<double> boot;
  for (int k = 0; k < o.resamples; ++k) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(B));
    for (std::size_t i = 0; i < B; ++i) w(static_cast<Eigen::Index>(pick(rng))) += 1.0;
    const auto [qb, vb] = quotient(w);
    if (vb > 0.0 && std::isfinite(qb)) boot.push_back(qb);
  }
  if (boot.size() < 2) throw Error(ErrorKind::DegenerateObservable, "bootstrap variance estimates degenerate");
  finish_interval(r, boot, static_cast<int>(B));
  r.ess = static_cast<double>(r.samples);
  r.caveat = "upper bound on the gap up to statistical error";
  return r;
}

void write_samples(std::ostream& out, const std::string& header_json, const SampleStream& samples) {
  if (header_json.find('\n') != std::string::npos) throw Error(ErrorKind::InvalidArgument, "header must be one line");
  out << header_json << '\n';
  const auto cols = samples.values.cols();
  std::vector<double> frame(static_cast<std::size_t>(cols + 1));
  for (std::size_t k = 0; k < samples.times.size(); ++k) {
    frame[0] = samples.times[k];
    for (Eigen::Index j = 0; j < cols; ++j) frame[static_cast<std::size_t>(j + 1)] = samples.values(static_cast<Eigen::Index>(k), j);
    for (double v : frame) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      char bytes[8];
      std::memcpy(bytes, &bits, 8);
      out.write(bytes, 8);
    }
  }
  if (!out) throw Error(ErrorKind::InvalidArgument, "sample stream write failed");
}

SampleStream read_samples(std::istream& in, std::string* header_json) {
  std::string header;
  if (!std::getline(in, header)) throw Error(ErrorKind::InvalidArgument, "missing sample header");
  int cols = 0;
  try {
    cols = nlohmann::json::parse(header).at("columns").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("bad sample header: ") + e.what());
  }
  if (cols < 0) throw Error(ErrorKind::InvalidArgument, "negative column count in sample header");
  if (header_json) *header_json = header;
  SampleStream s;
  std::vector<std::vector<double>> rows;
  std::vector<double> frame(static_cast<std::size_t>(cols + 1));
  char bytes[8];
  while (true) {
    bool complete = true;
    for (auto& v : frame) {
      if (!in.read(bytes, 8)) {
        complete = false;
        break;
      }
      std::uint64_t bits;
      std::memcpy(&bits, bytes, 8);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      std::memcpy(&v, &bits, 8);
    }
    if (!complete) break;
    s.times.push_back(frame[0]);
    rows.emplace_back(frame.begin() + 1, frame.end());
  }
  s.values.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (int j = 0; j < cols; ++j) s.values(static_cast<Eigen::Index>(k), j) = rows[k][static_cast<std::size_t>(j)];
  return s;
}

}  // namespace gaplab

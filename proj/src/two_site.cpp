#include "gaplab/two_site.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "gaplab/error.hpp"

namespace gaplab {

TwoSiteTable two_site_spectrum(const ModelSpec& model, const std::vector<int>& omegas) {
  if (omegas.empty()) throw Error(ErrorKind::InvalidArgument, "empty total range");
  if (!model.discrete()) throw Error(ErrorKind::InvalidArgument, "two-site table needs a discrete model");
  const auto pair = build_graph(GraphKind::Complete, 1, 2);
  TwoSiteTable table;
  GapOptions opt;
  opt.want_top = true;
  int ups = 0;
  int downs = 0;
  double prev = NAN;
  for (int omega : omegas) {
    const StateSet states(2, omega);
    const auto gen = build_generator(model, pair, states);
    const auto res = spectral_analysis(gen, opt);
    TwoSiteRow row{omega, res.gap, res.top, res.dimension};
    table.rows.push_back(row);
    if (res.dimension <= 1) continue;
    table.inf_gap = std::min(table.inf_gap, row.gap);
    table.sup_kappa = std::max(table.sup_kappa, row.kappa);
    if (!std::isnan(prev)) {
      if (row.gap < prev - 1e-9) ++downs;
      if (row.gap > prev + 1e-9) ++ups;
    }
    prev = row.gap;
  }
  if (table.sup_kappa == 0.0) table.sup_kappa = infinite_gap;  // every row was a Dirac point
  table.gap_trend = (ups > 0 && downs > 0) ? 2 : (downs > 0 ? -1 : (ups > 0 ? 1 : 0));
  return table;
}

double kappa_up_to(const TwoSiteTable& table, int omega) {
  double k = 0.0;
  bool found = false;
  for (const auto& row : table.rows) {
    if (row.omega < 1 || row.omega > omega || row.dimension <= 1) continue;
    k = std::max(k, row.kappa);
    found = true;
  }
  if (!found) throw Error(ErrorKind::InvalidArgument, "no two-site rows at or below the requested total");
  return k;
}

KernelMatrix kernel_matrix(const RateFunction& g, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "kernel order must be positive");
  const auto logf = g.log_factorials(n);
  auto lf = [&](int k) { return logf[static_cast<std::size_t>(k)]; };
  KernelMatrix K;
  K.n = n;
  K.entries = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd log_pi(n);
  for (int i = 1; i <= n; ++i) {
    // log sum_{l=0}^{i-1} 1/(g(l)! g(i-1-l)!)
    double top = -INFINITY;
    for (int l = 0; l < i; ++l) top = std::max(top, -lf(l) - lf(i - 1 - l));
    double acc = 0.0;
    for (int l = 0; l < i; ++l) acc += std::exp(-lf(l) - lf(i - 1 - l) - top);
    const double log_norm = top + std::log(acc);
    for (int j = 1; j <= n; ++j) {
      if (i <= n - j) continue;
      K.entries(i - 1, j - 1) = std::exp(-lf(n - j) - lf(i - 1 - (n - j)) - log_norm);
    }
    // row i carries the first coordinate n - i; its marginal weight
    log_pi(i - 1) = -lf(n - i) + log_norm;
  }
  const double shift = log_pi.maxCoeff();
  K.stationary = (log_pi.array() - shift).exp().matrix();
  K.stationary /= K.stationary.sum();

  const Eigen::VectorXd root = K.stationary.array().sqrt();
  Eigen::MatrixXd M = root.asDiagonal() * K.entries * root.cwiseInverse().asDiagonal();
  M = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::NumericError, "kernel eigen solve failed");
  K.spectrum = es.eigenvalues();
  return K;
}

KernelExtremes kernel_spectrum_extremes(const RateFunction& g, int n_max) {
  if (n_max < 2) throw Error(ErrorKind::InvalidArgument, "n_max must be at least 2");
  KernelExtremes out;
  out.mu1 = INFINITY;
  out.mu2 = -INFINITY;
  double prev_mu2 = -INFINITY;
  for (int n = 2; n <= n_max; ++n) {
    const auto K = kernel_matrix(g, n);
    Eigen::EigenSolver<Eigen::MatrixXd> general(K.entries, false);
    if (general.info() != Eigen::Success) throw Error(ErrorKind::NumericError, "kernel eigen solve failed");
    const double max_imag = general.eigenvalues().imag().cwiseAbs().maxCoeff();
    if (max_imag > 1e-7)
      throw Error(ErrorKind::ReversibilityViolation,
                  "kernel K_" + std::to_string(n) + " has eigenvalue with imaginary part " + std::to_string(max_imag));
    // drop the single eigenvalue closest to 1
    Eigen::Index perron = 0;
    (K.spectrum.array() - 1.0).abs().minCoeff(&perron);
    if (std::abs(K.spectrum(perron) - 1.0) > 1e-9)
      throw Error(ErrorKind::NumericError, "kernel K_" + std::to_string(n) + " has no unit eigenvalue");
    double lo = INFINITY;
    double hi = -INFINITY;
    for (Eigen::Index k = 0; k < K.spectrum.size(); ++k) {
      if (k == perron) continue;
      lo = std::min(lo, K.spectrum(k));
      hi = std::max(hi, K.spectrum(k));
    }
    out.table.push_back({n, lo, hi, max_imag});
    out.mu1 = std::min(out.mu1, lo);
    prev_mu2 = out.mu2;
    out.mu2 = std::max(out.mu2, hi);
  }
  out.last_increment = std::isfinite(prev_mu2) ? out.mu2 - prev_mu2 : 0.0;
  return out;
}

LsvReport lsv_condition_check(const RateFunction& g, int k_max, int k0_max) {
  if (k0_max < 1 || k_max < k0_max) throw Error(ErrorKind::InvalidArgument, "need k_max >= k0_max >= 1");
  LsvReport rep;
  rep.k_max = k_max;
  std::vector<double> v(static_cast<std::size_t>(k_max + 2));
  for (int k = 1; k <= k_max + 1; ++k) v[static_cast<std::size_t>(k)] = g(k);
  for (int k = 1; k <= k_max; ++k)
    rep.increment_sup = std::max(rep.increment_sup, std::abs(v[static_cast<std::size_t>(k + 1)] - v[static_cast<std::size_t>(k)]));
  double best_ratio = 0.0;
  for (int k0 = 1; k0 <= k0_max; ++k0) {
    // min over k of g(k) - max_{1 <= j <= k - k0} g(j)
    double running_max = -INFINITY;
    double c = INFINITY;
    for (int k = k0 + 1; k <= k_max; ++k) {
      running_max = std::max(running_max, v[static_cast<std::size_t>(k - k0)]);
      c = std::min(c, v[static_cast<std::size_t>(k)] - running_max);
    }
    rep.gap_by_k0.push_back(c);
    if (c > 0.0 && c / k0 > best_ratio + 1e-12) {
      best_ratio = c / k0;
      rep.best_k0 = k0;
      rep.best_c = c;
    }
  }
  rep.holds_on_range = rep.best_k0 > 0 && std::isfinite(rep.increment_sup);
  return rep;
}

}  // namespace gaplab
